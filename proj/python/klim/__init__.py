"""Relative atomic complexes of k-equal arrangements, their limits, and checks."""

import json
from fractions import Fraction

from . import _klim
from ._klim import InvalidInput, ResourceLimit, VerificationFailure

__version__ = _klim.__version__

__all__ = [
    "InvalidInput",
    "ResourceLimit",
    "VerificationFailure",
    "betti",
    "codegree",
    "compatible",
    "cup",
    "degree",
    "delta",
    "differential",
    "execute",
    "gproduct",
    "limit_d",
    "run",
]


def _key(sets):
    return tuple(tuple(s) for s in sets)


def _chain(terms):
    return {_key(sets): Fraction(c) for sets, c in terms}


def betti(k, l, max_atoms=None, jobs=1):
    """Betti numbers of A(k, l) by degree; None marks degrees a --max-atoms cut leaves undetermined."""
    dims, indeterminate = _klim.betti(k, l, max_atoms, jobs)
    out = {d: n for d, n in dims.items()}
    for d in indeterminate:
        out[d] = None
    return dict(sorted(out.items()))


def degree(l, atoms):
    return _klim.degree(l, [list(a) for a in atoms])


def differential(l, atoms):
    return _chain(_klim.differential(l, [list(a) for a in atoms]))


def cup(l, lhs, rhs):
    return _chain(_klim.cup(l, [list(a) for a in lhs], [list(a) for a in rhs]))


def limit_d(family):
    return _chain(_klim.limit_d([list(m) for m in family]))


def delta(family):
    return _chain(_klim.delta([list(m) for m in family]))


def codegree(family):
    return _klim.codegree([list(m) for m in family])


def gproduct(lhs, rhs):
    return _chain(_klim.gproduct([list(m) for m in lhs], [list(m) for m in rhs]))


def compatible(lhs, rhs):
    return _klim.compatible([list(m) for m in lhs], [list(m) for m in rhs])


def execute(command, check="", **options):
    """Run a CLI command in-process; returns (verdict, payload dict)."""
    config = {"command": command, "check": check}
    for name in ("lhs", "rhs"):
        if name in options and not isinstance(options[name], str):
            options[name] = json.dumps(options[name])
    config.update(options)
    verdict, payload = _klim.execute(json.dumps(config))
    return verdict, json.loads(payload)


def run(args):
    """Same as the klim executable; returns (exit_code, stdout, stderr)."""
    return _klim.run([str(a) for a in args])
