import argparse
import dataclasses
import json
import sys
from pathlib import Path


def parse_into(cls, argv=None):
    """Expose every dataclass field as a --flag; returns an instance."""
    ap = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            ap.add_argument(flag, dest=f.name, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, (list, tuple)):
            ap.add_argument(flag, dest=f.name, type=int, nargs="+", default=list(default))
        else:
            ap.add_argument(flag, dest=f.name, type=type(default) if default is not None else str, default=default)
    return cls(**vars(ap.parse_args(argv)))


def write(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
