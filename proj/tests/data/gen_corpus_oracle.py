"""Runs a corpus module under CPython and records, for the classes it
defines, their __mro__, their metaclass and issubclass for every ordered
pair.

    python3 gen_corpus_oracle.py corpus/protocols.py > protocols.oracle.json
"""

import json
import runpy
import sys


def record(path):
    namespace = runpy.run_path(path, run_name="corpus_module")
    classes = [
        v for v in namespace.values()
        if isinstance(v, type) and getattr(v, "__module__", None) == "corpus_module"
    ]
    classes.sort(key=lambda c: c.__name__)
    out = {"classes": [], "subclass_checks": [], "instance_checks": []}
    for c in classes:
        out["classes"].append({
            "name": c.__name__,
            "mro": [b.__name__ for b in c.__mro__],
            "metaclass": type(c).__name__,
        })
    for sub in classes:
        for sup in classes:
            try:
                result = issubclass(sub, sup)
            except Exception as exc:  # protocols without @runtime_checkable raise
                result = "error:" + type(exc).__name__
            out["subclass_checks"].append({"sub": sub.__name__, "sup": sup.__name__, "result": result})
    return out


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: gen_corpus_oracle.py <corpus file>")
    json.dump(record(sys.argv[1]), sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
