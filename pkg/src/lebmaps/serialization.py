"""JSON map descriptions and CSV exports.

Map document::

    {"degree": n, "partition": [0, ..., 1], "branches": [...],
     "sigma": float | null, "circle_c1": "unchecked" | "verified" | "failed"}

A partial specification replaces ``sigma``/``circle_c1`` by
``missing_index`` and lists ``n - 1`` branches. Branch domains are never
stored in branch objects; they come from the enclosing partition.
Floats are written with ``repr``, i.e. the shortest string that reads back
to the same double, so load/dump round-trips are exact.
"""

import csv
import json

from .branches import (
    AffineBranch,
    ExtendedBranch,
    Interval,
    PerturbedBranch,
    SinePerturbedBranch,
    TabulatedBranch,
)
from .exceptions import LebmapsError
from .extension import PartialMapSpec
from .maps import FullBranchMap
from .modulus import Modulus


class FormatError(LebmapsError, ValueError):
    """Malformed JSON map or spec document."""


_BRANCH_FIELDS = {
    "affine": {"kind", "slope", "intercept"},
    "sine_perturbed": {"kind", "slope", "amplitude", "frequency"},
    "tabulated": {"kind", "x", "f", "df"},
    "extended": {"kind", "spec"},
    "perturbed": {
        "kind",
        "base",
        "epsilon",
        "modulus",
        "v0_radius",
        "blend_width",
        "compensation_window",
    },
}
_MAP_FIELDS = {"degree", "partition", "branches", "sigma", "circle_c1"}
_MAP_REQUIRED = {"degree", "partition", "branches"}
_SPEC_FIELDS = {"degree", "partition", "branches", "missing_index"}
_MODULUS_FIELDS = {"kind", "param", "cap"}


def _check_fields(obj, allowed, required, what):
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise FormatError(f"unknown fields in {what}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise FormatError(f"missing fields in {what}: {sorted(missing)}")


def _num(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{what} must be a number")
    return float(value)


# -- branches ---------------------------------------------------------------


def branch_to_dict(b):
    if isinstance(b, AffineBranch):
        return {"kind": "affine", "slope": b.slope, "intercept": b.intercept}
    if isinstance(b, SinePerturbedBranch):
        return {
            "kind": "sine_perturbed",
            "slope": b.slope,
            "amplitude": b.amplitude,
            "frequency": b.frequency,
        }
    if isinstance(b, TabulatedBranch):
        return {"kind": "tabulated", "x": b.x.tolist(), "f": b.f.tolist(), "df": b.df.tolist()}
    if isinstance(b, ExtendedBranch):
        spec = PartialMapSpec(_partition_of(b), b.others, b.missing_index)
        return {"kind": "extended", "spec": spec_to_dict(spec)}
    if isinstance(b, PerturbedBranch):
        win = b.compensation_window
        return {
            "kind": "perturbed",
            "base": branch_to_dict(b.base),
            "epsilon": b.epsilon,
            "modulus": modulus_to_dict(b.modulus),
            "v0_radius": b.v0_radius,
            "blend_width": b.blend_width,
            "compensation_window": [win.lo, win.hi],
        }
    raise TypeError(f"cannot serialize branch of type {type(b).__name__}")


def _partition_of(ext):
    doms = sorted([b.domain for b in ext.others] + [ext.domain], key=lambda d: d.lo)
    return tuple([doms[0].lo] + [d.hi for d in doms])


def branch_from_dict(obj, domain):
    if not isinstance(obj, dict) or obj.get("kind") not in _BRANCH_FIELDS:
        raise FormatError(f"branch kind must be one of {sorted(_BRANCH_FIELDS)}")
    kind = obj["kind"]
    fields = _BRANCH_FIELDS[kind]
    _check_fields(obj, fields, fields, f"{kind} branch")
    try:
        if kind == "affine":
            return AffineBranch(domain, _num(obj["slope"], "slope"), _num(obj["intercept"], "intercept"))
        if kind == "sine_perturbed":
            return SinePerturbedBranch(
                domain,
                _num(obj["slope"], "slope"),
                _num(obj["amplitude"], "amplitude"),
                _num(obj["frequency"], "frequency"),
            )
        if kind == "tabulated":
            return TabulatedBranch(domain, obj["x"], obj["f"], obj["df"])
        if kind == "extended":
            spec = spec_from_dict(obj["spec"])
            if spec.missing_domain != domain:
                raise FormatError("embedded spec does not match the extended branch domain")
            return ExtendedBranch(domain, spec.branches, spec.missing_index)
        win = obj["compensation_window"]
        if not isinstance(win, list) or len(win) != 2:
            raise FormatError("compensation_window must be a pair")
        return PerturbedBranch(
            branch_from_dict(obj["base"], domain),
            modulus_from_dict(obj["modulus"]),
            _num(obj["epsilon"], "epsilon"),
            _num(obj["v0_radius"], "v0_radius"),
            _num(obj["blend_width"], "blend_width"),
            Interval(_num(win[0], "window"), _num(win[1], "window")),
        )
    except FormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid {kind} branch: {exc}") from exc


def modulus_to_dict(w):
    return {"kind": w.kind, "param": w.param, "cap": w.cap}


def modulus_from_dict(obj):
    _check_fields(obj, _MODULUS_FIELDS, {"kind", "param"}, "modulus")
    try:
        cap = obj.get("cap")
        return Modulus(obj["kind"], _num(obj["param"], "param"), None if cap is None else _num(cap, "cap"))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# -- maps and specs ---------------------------------------------------------


def _partition(obj):
    part = obj["partition"]
    if not isinstance(part, list) or len(part) < 3:
        raise FormatError("partition must be a list of at least three numbers")
    part = [_num(p, "partition entry") for p in part]
    if obj["degree"] != len(part) - 1:
        raise FormatError("degree does not match the partition length")
    return part


def _domains(part):
    try:
        return [Interval(a, b) for a, b in zip(part, part[1:])]
    except ValueError as exc:
        raise FormatError(f"invalid partition: {exc}") from exc


def map_to_dict(m):
    return {
        "degree": m.degree,
        "partition": list(m.partition),
        "branches": [branch_to_dict(b) for b in m.branches],
        "sigma": m.sigma,
        "circle_c1": m.circle_c1,
    }


def map_from_dict(obj):
    _check_fields(obj, _MAP_FIELDS, _MAP_REQUIRED, "map")
    part = _partition(obj)
    if not isinstance(obj["branches"], list) or len(obj["branches"]) != len(part) - 1:
        raise FormatError("map needs one branch per partition interval")
    branches = [branch_from_dict(b, d) for b, d in zip(obj["branches"], _domains(part))]
    sigma = obj.get("sigma")
    try:
        return FullBranchMap(
            tuple(branches),
            None if sigma is None else _num(sigma, "sigma"),
            obj.get("circle_c1", "unchecked"),
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def spec_to_dict(spec):
    return {
        "degree": spec.degree,
        "partition": list(spec.partition),
        "missing_index": spec.missing_index,
        "branches": [branch_to_dict(b) for b in spec.branches],
    }


def spec_from_dict(obj):
    _check_fields(obj, _SPEC_FIELDS, _SPEC_FIELDS, "partial map spec")
    part = _partition(obj)
    i0 = obj["missing_index"]
    if isinstance(i0, bool) or not isinstance(i0, int) or not 1 <= i0 <= len(part) - 1:
        raise FormatError("missing_index must be an integer in [1, degree]")
    doms = [d for i, d in enumerate(_domains(part), 1) if i != i0]
    if not isinstance(obj["branches"], list) or len(obj["branches"]) != len(doms):
        raise FormatError("partial spec needs degree - 1 branches")
    branches = [branch_from_dict(b, d) for b, d in zip(obj["branches"], doms)]
    try:
        return PartialMapSpec(tuple(part), tuple(branches), i0)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def _read(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def load_map(path):
    return map_from_dict(_read(path))


def load_spec(path):
    return spec_from_dict(_read(path))


def save_map(m, path):
    with open(path, "w") as fh:
        fh.write(dumps(map_to_dict(m)))


def save_spec(spec, path):
    with open(path, "w") as fh:
        fh.write(dumps(spec_to_dict(spec)))


# -- CSV --------------------------------------------------------------------


def _fmt(v):
    return "" if v is None else f"{v:.15g}"


def write_distortion_csv(report, fh):
    """Rows ``k,d_k,argmax_itinerary,predicted_lower_bound``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["k", "d_k", "argmax_itinerary", "predicted_lower_bound"])
    pred = report.predicted_lower_bounds or [None] * report.k_max
    for k, (d, word, p) in enumerate(zip(report.d, report.argmax_cylinder, pred), 1):
        w.writerow([k, _fmt(d), "".join(str(a) if a < 10 else f"({a})" for a in word), _fmt(p)])


def write_demo_csv(report, fh):
    """Rows ``k,measured_pair_bound,leftmost_cylinder_dk,predicted_lower_bound``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["k", "measured_pair_bound", "leftmost_cylinder_dk", "predicted_lower_bound"])
    for k, (p, d, q) in enumerate(
        zip(report.pair_bounds, report.d, report.predicted_lower_bounds), 1
    ):
        w.writerow([k, _fmt(p), _fmt(d), _fmt(q)])
