"""Write generated linearizable equations to a directory, one document per file.

Each file holds the quintic equation, the gauge and point map it came from,
and the solution family, so it can be fed straight back to ``geolin3 verify``
or ``geolin3 linearize --gauge file``.

Usage: python3 scripts/generate_corpus.py OUTDIR [--count N] [--seed S] [--check]
"""

import argparse
import sys
from pathlib import Path

from geolin3.cli import Options, cmd_check, cmd_generate
from geolin3.criteria import LINEARIZABLE


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--check", action="store_true", help="re-check every document after writing it")
    args = ap.parse_args(argv)

    args.outdir.mkdir(parents=True, exist_ok=True)
    report = cmd_generate(None, Options(), args.seed, args.count)
    failed = []
    for i, doc in enumerate(report.fields["documents"]):
        path = args.outdir / f"generated_{args.seed}_{i:03d}.ode"
        path.write_text(doc)
        if args.check:
            status = cmd_check(doc, Options()).fields.get("status")
            if status != LINEARIZABLE:
                failed.append(f"{path.name}: {status}")
    print(f"wrote {len(report.fields['documents'])} documents to {args.outdir}")
    for line in failed:
        print(f"check failed: {line}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
