"""Run every packaged fixture and the full pipeline on each, printing a short report."""

import argparse
import json

from gcdga import fixtures
from gcdga.constructions import weak_mirror_pipeline


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--json", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true", help="list every claim")
    args = p.parse_args()
    report = {}
    ok = True
    for name in fixtures.available():
        res = fixtures.run_fixture(name)
        pipe = weak_mirror_pipeline(fixtures.connection(name))
        ok &= res.ok
        report[name] = {"fixture": res.to_json(), "pipeline": pipe.to_json()}
        if args.json:
            continue
        print(f"{name}: fixture {'ok' if res.ok else 'FAILED'}, verdict {pipe.verdict}")
        for st in pipe.stages:
            print(f"  {st.name:<14} {'pass' if st.passed else 'fail'}")
        for c in res.checks:
            if args.verbose or not c.ok:
                print("  " + c.line())
    if args.json:
        print(json.dumps(report, indent=1, sort_keys=True))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
