#!/usr/bin/env python3
"""Generate a seeded corpus of Dwyer spans and write the documents to a
directory, one JSON file per span plus an index with content hashes."""

import argparse
import json
from pathlib import Path

from gcat import serialize as ser
from gcat.corpus import dwyer_span_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--group", default=None, help="Z2, Z3, S3, ... (default: trivial)")
    ap.add_argument("--out", default="corpus_out")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    index = []
    for idx, span in enumerate(dwyer_span_corpus(args.seed, args.count, args.group)):
        doc = {
            "label": span.label,
            "A": span.A.to_doc(), "B": span.B.to_doc(), "C": span.C.to_doc(),
            "i": {"object_map": dict(sorted(span.i.object_map.items())),
                  "morphism_map": dict(sorted(span.i.morphism_map.items()))},
            "c": {"object_map": dict(sorted(span.c.object_map.items())),
                  "morphism_map": dict(sorted(span.c.morphism_map.items()))},
            "witness": ser.witness_doc(span.witness),
        }
        path = out / f"span_{idx:03d}.json"
        path.write_text(ser.canonical_json(doc), encoding="utf-8")
        index.append({"file": path.name, "hash": ser.content_hash(doc), "label": span.label})
    (out / "index.json").write_text(
        ser.canonical_json({"seed": args.seed, "count": args.count,
                            "group": args.group or "1", "spans": index}),
        encoding="utf-8")
    print(f"wrote {len(index)} spans to {out}/")


if __name__ == "__main__":
    main()
