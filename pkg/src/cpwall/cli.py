"""Command-line front end: single points, table reproduction, figure curve data, self-test."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import asymptotics, golden
from .constants import HARTREE_EV, ev_to_angular_frequency, reduce
from .errors import CasimirError, IngestionError
from .lifshitz import DEFAULT_CONFIG, lifshitz_result
from .materials import (
    Drude,
    Ideal,
    Plasma,
    Static,
    Tabulated,
    load_polarizability_table,
    lookup,
)

COMPUTE_FIELDS = (
    "a_m", "T_K", "method", "eta", "kappa", "energy_J", "force_N",
    "l_used", "est_tail", "validity_flag",
)
METHODS = ("lifshitz", "asympt-short", "asympt-large", "auto", "all")
FIGURE_GRID = (0.15e-6, 8e-6, 40)

_LENGTH = re.compile(r"^\s*([-+0-9.eE]+)\s*(nm|um|µm|m)?\s*$")
_SCALE = {"nm": 1e-9, "um": 1e-6, "µm": 1e-6, "m": 1.0, None: 1.0}


class UsageError(Exception):
    pass


def parse_length(text: str) -> float:
    """'150nm', '1.5um', '2e-6m' or a bare number of metres."""
    m = _LENGTH.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot parse length {text!r}")
    try:
        value = float(m.group(1)) * _SCALE[m.group(2)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse length {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"length must be positive, got {text!r}")
    return value


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def emit_json(row: dict, fields=None) -> str:
    """One canonical JSON line: fixed key order, floats with 17 significant digits."""
    keys = fields if fields is not None else list(row)
    parts = []
    for k in keys:
        v = row.get(k)
        if v is None:
            s = "null"
        elif isinstance(v, (bool, np.bool_)):
            s = "true" if v else "false"
        elif isinstance(v, (int, np.integer)):
            s = str(int(v))
        elif isinstance(v, (float, np.floating)):
            v = float(v)
            s = format(v, ".17g") if math.isfinite(v) else "null"
        else:
            s = json.dumps(str(v))
        parts.append(f"{json.dumps(k)}: {s}")
    return "{" + ", ".join(parts) + "}"


def write_rows(rows, fields, output, stream):
    if output == "json":
        for row in rows:
            stream.write(emit_json(row, fields) + "\n")
        return
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([fmt(row.get(f)) for f in fields])


def worker_count(requested=None):
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("CPK_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def parallel_map(fn, items, jobs=None):
    """Apply ``fn`` to ``items`` and return results in input order."""
    items = list(items)
    n = worker_count(jobs)
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# model resolution


def resolve_atom(name, convention="rad/s"):
    try:
        return lookup(name, convention)
    except KeyError:
        pass
    if os.path.exists(name):
        return load_polarizability_table(name)
    raise UsageError(f"unknown atom {name!r} (registry name or polarizability table file)")


def resolve_metal(name, omega_p=None, gamma=None, convention="rad/s"):
    key = name.lower()
    if key == "ideal":
        if omega_p is not None or gamma is not None:
            raise UsageError("--omega-p/--gamma conflict with --metal ideal")
        return Ideal()
    if key in ("plasma", "drude"):
        if omega_p is None:
            raise UsageError(f"--metal {key} needs --omega-p")
        if key == "drude":
            if gamma is None:
                raise UsageError("--metal drude needs --gamma")
            return Drude(omega_p, gamma)
        if gamma is not None:
            raise UsageError("--gamma only applies to --metal drude")
        return Plasma(omega_p)
    try:
        metal = lookup(name, convention)
    except KeyError:
        raise UsageError(f"unknown metal {name!r}") from None
    if gamma is not None:
        return Drude(omega_p or metal.omega_p, gamma)
    if omega_p is not None:
        return Plasma(omega_p)
    return metal


# ---------------------------------------------------------------------------
# compute


@dataclass
class RunSpec:
    atom: str = "he-star"
    metal: str = "au"
    separations: list = field(default_factory=list)
    temperature: float = 300.0
    method: str = "auto"
    quantity: str = "both"
    ideal_metal: bool = False
    static_atom: bool = False
    output: str = "csv"
    alpha0: float | None = None
    omega_p: float | None = None
    gamma: float | None = None
    convention: str = "rad/s"

    def models(self):
        atom = resolve_atom(self.atom, self.convention)
        metal = resolve_metal(self.metal, self.omega_p, self.gamma, self.convention)
        if self.ideal_metal:
            metal = Ideal()
        if self.static_atom:
            atom = Static(alpha0=atom.alpha0)
        if self.alpha0 is not None:
            atom = _with_alpha0(atom, self.alpha0)
        return metal, atom


def _with_alpha0(atom, alpha0):
    if type(atom).__name__ == "SingleOscillator":
        return type(atom)(atom.omega0, alpha0=alpha0)
    return replace(atom, alpha0=alpha0)


def evaluate(method, a, T, metal, atom, alpha0=None, cfg=DEFAULT_CONFIG):
    """One :class:`CorrectionResult` for a named method."""
    state = reduce(a, T, metal, atom)
    # the closed forms assume a plasma wall and oscillator-form atoms
    if method == "lifshitz" or (method == "auto" and (isinstance(atom, Tabulated)
                                                     or isinstance(metal, Drude))):
        return lifshitz_result(state, metal, atom, cfg, alpha0=alpha0)
    if method == "asympt-short":
        return asymptotics.asymptotic_result(state, metal, atom, "short", alpha0)
    if method == "asympt-large":
        return asymptotics.asymptotic_result(state, metal, atom, "large", alpha0)
    if method == "auto":
        if not atom.oscillator_terms():
            # static atom: the large branch is exact in beta_A, the short one in T
            branch = "large" if a >= 1e-6 else "short"
            return asymptotics.asymptotic_result(state, metal, atom, branch, alpha0)
        return asymptotics.crossover_select(state, metal, atom, alpha0=alpha0)
    raise UsageError(f"unknown method {method!r}")


def _compute_row(a, T, method, metal, atom, quantity, alpha0, tolerate):
    row = dict.fromkeys(COMPUTE_FIELDS)
    row.update(a_m=a, T_K=T, method=method.replace("-", "_"))
    try:
        res = evaluate(method, a, T, metal, atom, alpha0)
    except CasimirError as exc:
        row["validity_flag"] = f"error: {exc}"
        return row, not tolerate
    row.update(
        method=res.method,
        eta=res.eta if quantity in ("eta", "both") else None,
        kappa=res.kappa if quantity in ("kappa", "both") else None,
        energy_J=res.energy if quantity in ("eta", "both") else None,
        force_N=res.force if quantity in ("kappa", "both") else None,
        l_used=res.truncation_report[0],
        est_tail=res.truncation_report[1],
        validity_flag=res.validity,
    )
    return row, False


def cmd_compute(spec: RunSpec, stream=None, jobs=None) -> int:
    stream = stream or sys.stdout
    metal, atom = spec.models()
    if isinstance(atom, Tabulated) and spec.method in ("asympt-short", "asympt-large"):
        raise UsageError("closed-form methods need an oscillator-form atom, not a table")
    methods = (["lifshitz", "asympt-short", "asympt-large"] if spec.method == "all"
               else [spec.method])
    if spec.method == "all" and isinstance(atom, Tabulated):
        methods = ["lifshitz"]
    tasks = [(a, m) for a in spec.separations for m in methods]
    tolerate = spec.method == "all"

    def run(task):
        a, m = task
        return _compute_row(a, spec.temperature, m, metal, atom, spec.quantity, spec.alpha0,
                            tolerate)

    results = parallel_map(run, tasks, jobs)
    write_rows([r for r, _ in results], COMPUTE_FIELDS, spec.output, stream)
    return 1 if any(failed for _, failed in results) else 0


# ---------------------------------------------------------------------------
# tables


def table_rows(which, diff=False, tables=None, all_cells=False, T=300.0, jobs=None,
               convention="rad/s"):
    """Rows (dicts) reproducing the golden table ``which`` (1: eta, 2: kappa)."""
    force = which == 2
    gold = golden.golden(which)
    metal = lookup("au", convention)
    tasks = [(atom, a_um) for atom in golden.ATOMS for a_um in golden.SEPARATIONS_UM]

    def run(task):
        name, a_um = task
        atom = lookup(name, convention)
        a = a_um * 1e-6
        printed = gold[name].get(a_um, {})
        row = {"atom": name, "a_um": a_um}
        st = reduce(a, T, metal, atom)
        res = lifshitz_result(st, metal, atom)
        row["b"] = res.kappa if force else res.eta
        if all_cells or printed.get("c") is not None:
            row["c"] = asymptotics.kappa_large(st) if force else asymptotics.eta_large(st)
        if all_cells or printed.get("d") is not None:
            row["d"] = asymptotics.kappa_short(st) if force else asymptotics.eta_short(st)
        tab = (tables or {}).get(name)
        if tab is not None:
            ra = lifshitz_result(reduce(a, T, metal, tab), metal, tab)
            row["a"] = ra.kappa if force else ra.eta
        if diff:
            for col in ("a", "b", "c", "d"):
                if row.get(col) is not None and printed.get(col) is not None:
                    row[f"diff_{col}"] = abs(row[col] - printed[col])
        return row

    return parallel_map(run, tasks, jobs)


def table_fields(rows, diff):
    cols = ["atom", "a_um"]
    if any("a" in r for r in rows):
        cols.append("a")
    cols += ["b", "c", "d"]
    if diff:
        cols += [f"diff_{c}" for c in ("a", "b", "c", "d") if any(f"diff_{c}" in r for r in rows)]
    return cols


def cmd_table(which, diff=False, tables=None, output="csv", stream=None, jobs=None,
              all_cells=False, convention="rad/s"):
    stream = stream or sys.stdout
    rows = table_rows(which, diff=diff, tables=tables, all_cells=all_cells, jobs=jobs,
                      convention=convention)
    write_rows(rows, table_fields(rows, diff), output, stream)
    if diff:
        worst = max((r[k] for r in rows for k in ("diff_b", "diff_c", "diff_d") if k in r),
                    default=0.0)
        print(f"# max |diff| over columns b, c, d: {worst:.6f}", file=sys.stderr)
        return 0 if worst <= 0.001 else 1
    return 0


# ---------------------------------------------------------------------------
# figures


def figure_rows(which, atom_name="he-star", grid=FIGURE_GRID, T=300.0, jobs=None,
                convention="rad/s"):
    """Curves 1-4 (full; ideal metal; static atom; both) of eta (1) or kappa (2)."""
    metal = lookup("au", convention)
    atom = lookup(atom_name, convention)
    variants = [(metal, atom), (Ideal(), atom), (metal, Static()), (Ideal(), Static())]
    a_grid = np.geomspace(grid[0], grid[1], int(grid[2]))

    def run(a):
        row = {"a_um": float(a) * 1e6}
        for i, (m, at) in enumerate(variants, start=1):
            res = lifshitz_result(reduce(float(a), T, m, at), m, at)
            row[f"curve{i}"] = res.eta if which == 1 else res.kappa
        return row

    return parallel_map(run, a_grid, jobs)


def cmd_figure(which, atom="he-star", grid=FIGURE_GRID, tables=None, output="csv",
               stream=None, jobs=None, convention="rad/s"):
    stream = stream or sys.stdout
    if which == 3:
        if not tables:
            raise UsageError("figure 3 needs at least one --polarizability-file")
        au = ev_to_angular_frequency(HARTREE_EV)
        rows = []
        for name, tab in tables.items():
            for xi, r in zip(tab.xi, tab.alpha_ratio):
                rows.append({"atom": name, "xi_au": xi / au, "ratio": r})
        write_rows(rows, ("atom", "xi_au", "ratio"), output, stream)
        return 0
    rows = figure_rows(which, atom, grid, jobs=jobs, convention=convention)
    write_rows(rows, ("a_um", "curve1", "curve2", "curve3", "curve4"), output, stream)
    return 0


# ---------------------------------------------------------------------------
# selftest


def selftest(stream=None, jobs=None) -> int:
    stream = stream or sys.stdout
    ok_all = True

    def report(name, ok, detail):
        nonlocal ok_all
        ok_all &= bool(ok)
        stream.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")

    for which in (1, 2):
        rows = table_rows(which, diff=True, jobs=jobs)
        for col in ("b", "c", "d"):
            diffs = [(r[f"diff_{col}"], r["atom"], r["a_um"]) for r in rows if f"diff_{col}" in r]
            worst = max(diffs)
            bad = sum(d > 0.001 for d, _, _ in diffs)
            report(f"table {which} column ({col})", bad == 0,
                   f"{len(diffs)} cells, {bad} beyond 0.001, worst {worst[0]:.5f} "
                   f"({worst[1]}, {worst[2]} um)")
    st = reduce(8e-6, 300.0, Ideal(), Static())
    eta = lifshitz_result(st, Ideal(), Static()).eta
    report("ideal static high-T", abs(eta / (st.tau / 6) - 1) < 1e-3,
           f"eta={eta:.6f}, tau/6={st.tau / 6:.6f}")
    st0 = reduce(1e-6, 0.0, Ideal(), Static())
    report("zero-T normalization", abs(asymptotics.eta_short(st0) - 1) < 1e-12,
           f"eta_short={asymptotics.eta_short(st0):.15f}")
    return 0 if ok_all else 1


# ---------------------------------------------------------------------------
# argument parsing


def _load_tables(specs):
    """Parse ``name=path`` (or bare ``path``, taken as he-star) table options."""
    tables = {}
    for item in specs or ():
        name, _, path = item.rpartition("=")
        name = name or "he-star"
        name = {"he*": "he-star", "he": "he-star"}.get(name.lower(), name.lower())
        tables[name] = load_polarizability_table(path)
    return tables


def build_parser():
    p = argparse.ArgumentParser(prog="cpwall", description=__doc__)
    p.add_argument("--jobs", type=int, default=None, help="worker threads (CPK_THREADS caps it)")
    p.add_argument("--convention", choices=("rad/s", "ev"), default="rad/s",
                   help="preset frequencies: quoted rad/s values or converted eV values")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="correction factors at given separations")
    c.add_argument("--atom", default="he-star")
    c.add_argument("--metal", default="au", help="au, ideal, plasma, drude")
    c.add_argument("--omega-p", type=float, help="plasma frequency override, rad/s")
    c.add_argument("--gamma", type=float, help="Drude relaxation frequency, rad/s")
    sep = c.add_mutually_exclusive_group(required=True)
    sep.add_argument("--a", type=parse_length, nargs="+", help="separations, e.g. 150nm 1um")
    sep.add_argument("--grid", nargs=3, metavar=("START", "STOP", "COUNT"),
                     help="log-spaced separations")
    c.add_argument("--T", type=float, default=300.0, help="temperature, K")
    c.add_argument("--method", choices=METHODS, default="auto")
    c.add_argument("--quantity", choices=("eta", "kappa", "both"), default="both")
    c.add_argument("--ideal-metal", action="store_true")
    c.add_argument("--static-atom", action="store_true")
    c.add_argument("--alpha0", type=float, help="static polarizability volume, m^3")
    c.add_argument("--output", choices=("csv", "json"), default="csv")

    t = sub.add_parser("table", help="reproduce table 1 (eta) or 2 (kappa)")
    t.add_argument("which", type=int, choices=(1, 2))
    t.add_argument("--diff", action="store_true", help="append |computed - printed|")
    t.add_argument("--all-cells", action="store_true",
                   help="compute asymptotic columns at every separation")
    t.add_argument("--polarizability-file", action="append", metavar="[ATOM=]PATH")
    t.add_argument("--output", choices=("csv", "json"), default="csv")

    f = sub.add_parser("figure", help="curve data for figure 1, 2 or 3")
    f.add_argument("which", type=int, choices=(1, 2, 3))
    f.add_argument("--atom", default="he-star")
    f.add_argument("--grid", nargs=3, metavar=("START", "STOP", "COUNT"))
    f.add_argument("--polarizability-file", action="append", metavar="[ATOM=]PATH")
    f.add_argument("--output", choices=("csv", "json"), default="csv")

    sub.add_parser("selftest", help="golden-table comparison and spot checks")
    return p


def _parse_grid(grid):
    try:
        start, stop, count = parse_length(grid[0]), parse_length(grid[1]), int(grid[2])
    except (argparse.ArgumentTypeError, ValueError) as exc:
        raise UsageError(f"bad grid {grid!r}: {exc}") from None
    if count < 1 or stop < start:
        raise UsageError("grid needs START <= STOP and COUNT >= 1")
    return start, stop, count


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            if args.a is not None:
                seps = sorted(args.a)
            else:
                seps = [float(v) for v in np.geomspace(*_parse_grid(args.grid))]
            spec = RunSpec(
                atom=args.atom, metal=args.metal, separations=seps, temperature=args.T,
                method=args.method, quantity=args.quantity, ideal_metal=args.ideal_metal,
                static_atom=args.static_atom, output=args.output, alpha0=args.alpha0,
                omega_p=args.omega_p, gamma=args.gamma, convention=args.convention,
            )
            if args.T < 0:
                raise UsageError("temperature must be non-negative")
            if args.ideal_metal and (args.omega_p is not None or args.gamma is not None):
                raise UsageError("--ideal-metal conflicts with --omega-p/--gamma")
            return cmd_compute(spec, jobs=args.jobs)
        if args.command == "table":
            tables = _load_tables(args.polarizability_file)
            return cmd_table(args.which, diff=args.diff, tables=tables, output=args.output,
                             jobs=args.jobs, all_cells=args.all_cells,
                             convention=args.convention)
        if args.command == "figure":
            tables = _load_tables(args.polarizability_file)
            grid = FIGURE_GRID if args.grid is None else _parse_grid(args.grid)
            return cmd_figure(args.which, atom=args.atom, grid=grid, tables=tables,
                              output=args.output, jobs=args.jobs, convention=args.convention)
        if args.command == "selftest":
            return selftest(jobs=args.jobs)
    except UsageError as exc:
        parser.error(str(exc))
    except IngestionError as exc:
        parser.error(f"polarizability table: {exc}")
    except CasimirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())

