"""Command-line front end: ``measure``, ``sweep``, ``pdist``, ``mmqs-verify``.

Data goes to standard output only (JSON or CSV); diagnostics go to standard
error.  Exit status is 0 on success, 2 for invalid flags or values outside a
constructor's domain, and 3 for unreadable or malformed input files.

Floats are written with ``repr``, the shortest decimal string that parses back
to the same double, so outputs are bit-stable and a state written by
``export-state`` re-reads to an identical state.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Optional


from . import analytic, mmqs, oracle, quadrature, states
from .core import DensityMatrix, Observable, PureState
from .measure import SPIN_HALF_UNIT, BinSpec, MeasureReport, bin_observable, effective_size, measure

EXIT_USAGE = 2
EXIT_FILE = 3

SPIN_STATES = ("ghz", "psi1", "uniform", "w", "gghz")
FOCK_STATES = ("scs", "mixed-scs", "thermal")
STATES = SPIN_STATES + ("noon",) + FOCK_STATES + ("file",)
OBSERVABLES = ("magnetization", "number", "quadrature", "file")
DEFAULT_THERMAL_CUTOFF = 50


class UsageError(Exception):
    """Flags that parse but do not make sense together."""


class FileFormatError(Exception):
    """A state or observable file that cannot be read or does not validate."""


# ---------------------------------------------------------------- file formats

def write_state_file(state) -> dict:
    """Serialize a state as a StateFile document (density matrices: upper triangle)."""
    if isinstance(state, PureState):
        entries = [{"i": int(i), "re": float(c.real), "im": float(c.imag)}
                   for i, c in zip(state.indices, state.coefficients)]
        return {"dimension": int(state.dimension), "kind": "pure", "entries": entries}
    if isinstance(state, DensityMatrix):
        entries = [{"i": int(i), "j": int(j), "re": float(v.real), "im": float(v.imag)}
                   for (i, j), v in state.entries.items()]
        return {"dimension": int(state.dimension), "kind": "density", "entries": entries}
    raise TypeError(f"cannot serialize {type(state).__name__}")


def read_state_file(doc: dict):
    """Parse a StateFile document.  Lower-triangle density entries are conjugated into place."""
    try:
        dim = doc["dimension"]
        kind = doc["kind"]
        raw = doc["entries"]
        if not isinstance(dim, int) or isinstance(dim, bool) or not isinstance(raw, list):
            raise FileFormatError("dimension must be an integer and entries a list")
        if kind == "pure":
            amps = {}
            for e in raw:
                i = _int_field(e, "i")
                if i in amps:
                    raise FileFormatError(f"duplicate entry for index {i}")
                amps[i] = complex(float(e["re"]), float(e["im"]))
            return PureState(amps, dim)
        if kind == "density":
            entries = {}
            for e in raw:
                i, j = _int_field(e, "i"), _int_field(e, "j")
                v = complex(float(e["re"]), float(e["im"]))
                if i > j:
                    i, j, v = j, i, v.conjugate()
                if (i, j) in entries and entries[(i, j)] != v:
                    raise FileFormatError(f"entries ({i},{j}) and ({j},{i}) are not conjugate")
                entries[(i, j)] = v
            return DensityMatrix(entries, dim)
        raise FileFormatError(f"kind must be 'pure' or 'density', got {kind!r}")
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"malformed state file: {exc!r}") from exc
    except ValueError as exc:
        raise FileFormatError(f"invalid state: {exc}") from exc


def write_observable_file(obs: Observable) -> dict:
    return {"name": obs.name, "eigenvalues": [float(a) for a in obs.eigenvalues]}


def read_observable_file(doc: dict) -> Observable:
    try:
        values = doc["eigenvalues"]
        name = doc.get("name", "")
        if not isinstance(values, list) or not isinstance(name, str):
            raise FileFormatError("eigenvalues must be a list and name a string")
        return Observable([float(a) for a in values], name)
    except (KeyError, TypeError, AttributeError) as exc:
        raise FileFormatError(f"malformed observable file: {exc!r}") from exc
    except ValueError as exc:
        raise FileFormatError(f"invalid observable: {exc}") from exc


def _int_field(entry, key):
    v = entry[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise FileFormatError(f"field {key!r} must be an integer, got {v!r}")
    return v


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from exc


# ---------------------------------------------------------------- state setup

def parse_alpha(text: str) -> complex:
    """``"RE,IM"`` or a bare real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM or RE, got {text!r}")


def _require(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for --state {args.state}")
    return value


def _default_observable(state_kind):
    if state_kind in SPIN_STATES:
        return "magnetization"
    if state_kind in ("noon", "thermal"):
        return "number"
    if state_kind in ("scs", "mixed-scs"):
        return "quadrature"
    return "file"


def build_state(args, n: Optional[int] = None):
    """Construct the state selected by ``--state`` (``n`` overrides ``--n``)."""
    kind = args.state
    if kind in SPIN_STATES or kind == "noon":
        n = _require(args, "n") if n is None else n
    if kind == "ghz":
        return states.ghz(n)
    if kind == "psi1":
        return states.single_excitation(n)
    if kind == "uniform":
        return states.uniform(n)
    if kind == "w":
        return states.w_state(n)
    if kind == "gghz":
        return states.generalized_ghz(n, _require(args, "eps"))
    if kind == "noon":
        return states.noon(n, args.cutoff if args.cutoff is not None else None)
    if kind == "scs":
        alpha = _require(args, "alpha")
        if args.idealized:
            return states.scs_idealized(alpha)
        return states.scs(alpha, args.cutoff)
    if kind == "mixed-scs":
        alpha = _require(args, "alpha")
        if args.idealized:
            return states.mixed_scs(alpha)
        return states.mixed_scs_fock(alpha, args.cutoff)
    if kind == "thermal":
        cutoff = DEFAULT_THERMAL_CUTOFF if args.cutoff is None else args.cutoff
        return states.thermal(_require(args, "beta"), cutoff)
    if kind == "file":
        return read_state_file(_load_json(_require(args, "input")))
    raise UsageError(f"unknown state {kind!r}")


def _fock_cutoff(state):
    return state.dimension - 1


def evaluate(args, n: Optional[int] = None) -> MeasureReport:
    """Build state and observable from the flags and evaluate the measure."""
    kind = args.state
    obs_kind = args.observable or _default_observable(kind)
    bins = BinSpec(args.bin_width, None) if args.bin_width is not None else None
    # quadrature spectra are symmetric about zero, so their bins keep an edge there
    qbins = BinSpec(args.bin_width) if args.bin_width is not None else quadrature.DEFAULT_BINS
    if kind == "uniform" and obs_kind == "magnetization":
        n_val = _require(args, "n") if n is None else n
        if n_val > states.MAX_UNIFORM_SPINS and bins is None:
            return _uniform_analytic(n_val)
    if obs_kind == "quadrature" and kind in ("scs", "mixed-scs") and not args.idealized:
        alpha = _require(args, "alpha")
        if kind == "scs":
            return quadrature.scs_full_report(alpha, args.cutoff, qbins)
        return quadrature.mixed_scs_full_report(alpha, args.cutoff, qbins)
    state = build_state(args, n)
    if obs_kind == "quadrature" and not args.idealized:
        if kind in SPIN_STATES or kind == "noon":
            raise UsageError("--observable quadrature needs a single-mode photonic state")
        # Fock-basis states are re-expressed in the quadrature eigenbasis;
        # without --alpha the quadrature angle is zero
        spectrum = quadrature.quadrature_spectrum(args.alpha or 1.0, _fock_cutoff(state))
        convert = (quadrature.pure_to_quadrature if isinstance(state, PureState)
                   else quadrature.density_to_quadrature)
        state, obs = convert(state, spectrum, qbins)
        return measure(state, obs, SPIN_HALF_UNIT)
    obs = build_observable(args, obs_kind, state, n)
    if bins is not None:
        obs = bin_observable(obs, bins)
    return measure(state, obs, SPIN_HALF_UNIT)


def _uniform_analytic(n: int) -> MeasureReport:
    m = float(analytic.uniform_measure_sum(n))
    return MeasureReport(m, effective_size(m), analytic.uniform_distribution(n), "analytic")


def build_observable(args, obs_kind, state, n=None) -> Observable:
    kind = args.state
    if obs_kind == "magnetization":
        if kind in SPIN_STATES:
            spins = args.n if n is None else n
        else:
            spins = _require(args, "n")
        return states.magnetization_z(spins)
    if obs_kind == "number":
        if kind == "noon":
            return states.mode_photon_number(math.isqrt(state.dimension) - 1)
        if kind in SPIN_STATES:
            raise UsageError("--observable number needs a photonic state")
        return states.photon_number(_fock_cutoff(state))
    if obs_kind == "quadrature":
        if kind not in ("scs", "mixed-scs"):
            raise UsageError("--idealized applies to scs and mixed-scs only")
        return states.idealized_quadrature(_require(args, "alpha"))
    if obs_kind == "file":
        if args.observable_file is None:
            raise UsageError("--observable file needs --observable-file PATH")
        return read_observable_file(_load_json(args.observable_file))
    raise UsageError(f"unknown observable {obs_kind!r}")


# ---------------------------------------------------------------- output

def _fmt(x: float) -> str:
    return repr(float(x))


def _dump_json(doc, out):
    out.write(json.dumps(doc, allow_nan=True))
    out.write("\n")


def report_json(rep: MeasureReport) -> dict:
    return {
        "M": float(rep.m),
        "N_eff": int(rep.n_eff),
        "path": rep.path,
        "distribution": [[float(d), float(p)] for d, p in rep.distribution],
    }


def cmd_measure(args, out):
    _dump_json(report_json(evaluate(args)), out)


def cmd_pdist(args, out):
    rep = evaluate(args)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["delta", "p"])
    for d, p in rep.distribution:
        w.writerow([_fmt(d), _fmt(p)])


def cmd_sweep(args, out):
    if args.state not in SPIN_STATES + ("noon",):
        raise UsageError(f"sweep needs an N-indexed state, got {args.state!r}")
    if args.n_min < 1 or args.n_max < args.n_min or args.step < 1:
        raise UsageError("need 1 <= --n-min <= --n-max and --step >= 1")
    ns = range(args.n_min, args.n_max + 1, args.step)
    uniform = args.state == "uniform"
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "M", "N_eff", "path"] + (["M_paper_closed"] if uniform else []))
    for n in ns:
        rep = evaluate(args, n)
        row = [n, _fmt(rep.m), rep.n_eff, rep.path]
        if uniform:
            row.append(_fmt(analytic.uniform_measure_closed(n)))
        w.writerow(row)


def cmd_mmqs_verify(args, out):
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    if args.trials < 0:
        raise UsageError("--trials must be nonnegative")
    obs = oracle.random_spectrum(args.dim, args.seed)
    rep = mmqs.verify_theorem(obs, args.trials, args.seed, raise_on_violation=False)
    _dump_json(rep.as_dict(), out)


def cmd_export_state(args, out):
    _dump_json(write_state_file(build_state(args)), out)


# ---------------------------------------------------------------- parser

def _state_flags(p, with_n=True):
    p.add_argument("--state", choices=STATES, required=True)
    if with_n:
        p.add_argument("--n", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--alpha", type=parse_alpha)
    p.add_argument("--beta", type=float)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--input", help="StateFile JSON for --state file")
    p.add_argument("--idealized", action="store_true",
                   help="cat states on the two-point packet spectrum instead of the Fock space")


def _observable_flags(p):
    p.add_argument("--observable", choices=OBSERVABLES)
    p.add_argument("--observable-file", help="ObservableFile JSON for --observable file")
    p.add_argument("--bin-width", type=float,
                   help="merge eigenvalues into bins of this width, starting at the smallest eigenvalue")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macrocoherence",
                                     description="Macroscopic coherence measure of quantum states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="measure, effective size and distance distribution as JSON")
    _state_flags(p)
    _observable_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("pdist", help="distance distribution as CSV")
    _state_flags(p)
    _observable_flags(p)
    p.set_defaults(func=cmd_pdist)

    p = sub.add_parser("sweep", help="measure over a range of N as CSV")
    _state_flags(p, with_n=False)
    _observable_flags(p)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.set_defaults(func=cmd_sweep, n=None)

    p = sub.add_parser("mmqs-verify", help="sampled check of the maximal-state bound on a random spectrum")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_mmqs_verify)

    p = sub.add_parser("export-state", help="write the selected state as a StateFile")
    _state_flags(p)
    p.set_defaults(func=cmd_export_state)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except (UsageError, ValueError, IndexError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
