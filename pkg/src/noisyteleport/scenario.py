"""Scenario files: parsing, execution and rendering.

A scenario is a JSON document::

    {
      "dim": 2,
      "input_state": "plus",
      "channel_r": {"kind": "dephasing", "params": {"p": 0.1}},
      "channel_b": "line_b.json",
      "mode": "exact",
      "accept": "all",
      "reports": ["outcomes", "compare", "homogeneity", {"angular": "1/2"}]
    }

``input`` is accepted as an alias of ``input_state``.  Complex numbers are
``[re, im]`` pairs and matrices are row-major lists of rows.  A channel is
either an inline object or a path (relative to the scenario file) to a
channel file holding the same object, optionally with a ``dim`` field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    VERDICT_MISMATCH,
    angular_momentum_transpose_report,
    compare_teleport_vs_direct,
    homogeneity_report,
    parse_spin,
    rotation_unitary,
)
from .channels import CHANNEL_KINDS, KrausChannel, build_standard_channel, validate_channel
from .haar import haar_state
from .noisy_sim import (
    compare_branchwise,
    enumerate_outcomes,
    predict_outcomes_via_effective_error,
    sample_outcomes,
)
from .qmath import TOL_ALG, fidelity
from .teleport import BellMeasurement

SCENARIO_FIELDS = {"dim", "input_state", "input", "channel_r", "channel_b", "mode", "accept", "reports"}
REQUIRED_FIELDS = {"dim", "channel_r", "channel_b"}
REPORT_KINDS = ("outcomes", "compare", "homogeneity", "angular")

# Default tolerances for the invariants checked during a run.
TOL_ORACLE = 1e-10
TOL_PROB = 1e-10
TOL_COMPARE = 1e-9
TOL_ANGULAR = 1e-12


class ScenarioError(ValueError):
    """Invalid scenario; ``messages`` holds one ``field: problem`` line each."""

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("\n".join(self.messages))


@dataclass
class Scenario:
    dim: int
    input_spec: object
    psi: np.ndarray
    channel_r: KrausChannel
    channel_b: KrausChannel
    channel_r_spec: dict
    channel_b_spec: dict
    mode: str = "exact"
    shots: int | None = None
    seed: int | None = None
    accept: list | None = None
    reports: list = field(default_factory=lambda: [("outcomes", {})])


# --- parsing --------------------------------------------------------------


def _complex(value, where: str) -> complex:
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ScenarioError([f"{where}: expected a complex number as [re, im], got {value!r}"])


def _complex_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ScenarioError([f"{where}: expected a matrix as a list of rows"])
    rows = [[_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise ScenarioError([f"{where}: rows have different lengths"])
    return np.array(rows, dtype=complex)


def _int(value, where: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioError([f"{where}: expected an integer, got {value!r}"])
    if minimum is not None and value < minimum:
        raise ScenarioError([f"{where}: must be at least {minimum}, got {value}"])
    return value


def _parse_input(spec, dim: int, where: str) -> np.ndarray:
    if isinstance(spec, str):
        if spec == "zero":
            psi = np.zeros(dim, dtype=complex)
            psi[0] = 1.0
            return psi
        if spec == "plus":
            return np.ones(dim, dtype=complex) / np.sqrt(dim)
        match = re.fullmatch(r"haar\((-?\d+)\)", spec.strip())
        if match:
            return haar_state(dim, int(match.group(1)))
        raise ScenarioError([f"{where}: unknown state {spec!r}; use zero, plus, haar(seed) or amplitudes"])
    if isinstance(spec, dict):
        if set(spec) != {"haar"}:
            raise ScenarioError([f"{where}: object form must be {{\"haar\": seed}}"])
        return haar_state(dim, _int(spec["haar"], f"{where}.haar"))
    if isinstance(spec, list):
        psi = np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(spec)])
        if psi.shape[0] != dim:
            raise ScenarioError([f"{where}: {psi.shape[0]} amplitudes given for dim {dim}"])
        n2 = float(np.vdot(psi, psi).real)
        if abs(n2 - 1.0) > TOL_ALG:
            raise ScenarioError([f"{where}: state is not normalized (norm^2 = {n2:.12g})"])
        return psi / np.sqrt(n2)
    raise ScenarioError([f"{where}: unsupported input state {spec!r}"])


def _parse_unitary(value, dim: int, where: str) -> np.ndarray:
    if isinstance(value, dict):
        if set(value) != {"rotation"} or not isinstance(value["rotation"], dict):
            raise ScenarioError([f"{where}: expected a matrix or {{\"rotation\": {{axis, angle}}}}"])
        rot = value["rotation"]
        if set(rot) != {"axis", "angle"}:
            raise ScenarioError([f"{where}.rotation: fields are axis and angle"])
        angle = rot["angle"]
        if not isinstance(angle, (int, float)) or isinstance(angle, bool):
            raise ScenarioError([f"{where}.rotation.angle: expected a number"])
        try:
            return rotation_unitary(dim, rot["axis"], angle)
        except ValueError as exc:
            raise ScenarioError([f"{where}.rotation: {exc}"]) from None
    return _complex_matrix(value, where)


def parse_channel(spec, dim: int, where: str, base_dir: Path | None = None) -> tuple[KrausChannel, dict]:
    """Build a channel from an inline object or a channel file path.

    Returns the channel and the resolved (inline) spec.
    """
    if isinstance(spec, str):
        path = Path(spec)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            text = path.read_text()
        except OSError as exc:
            raise ScenarioError([f"{where}: cannot read channel file {spec!r}: {exc.strerror}"]) from None
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(
                [f"{where}: syntax error in {spec!r} at line {exc.lineno}, column {exc.colno}: {exc.msg}"]
            ) from None
    if not isinstance(spec, dict):
        raise ScenarioError([f"{where}: expected a channel object or file path"])
    unknown = set(spec) - {"kind", "params", "kraus", "dim"}
    if unknown:
        raise ScenarioError([f"{where}: unknown field(s) {sorted(unknown)}"])
    if "dim" in spec and _int(spec["dim"], f"{where}.dim") != dim:
        raise ScenarioError([f"{where}.dim: channel dimension {spec['dim']} differs from scenario dim {dim}"])
    kind = spec.get("kind")
    if kind not in CHANNEL_KINDS:
        raise ScenarioError([f"{where}.kind: expected one of {list(CHANNEL_KINDS)}, got {kind!r}"])
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioError([f"{where}.params: expected an object"])

    if kind == "custom":
        if "params" in spec or "kraus" not in spec:
            raise ScenarioError([f"{where}: custom channels take a kraus list and no params"])
        if not isinstance(spec["kraus"], list) or not spec["kraus"]:
            raise ScenarioError([f"{where}.kraus: expected a non-empty list of matrices"])
        kraus = [_complex_matrix(k, f"{where}.kraus[{i}]") for i, k in enumerate(spec["kraus"])]
        for i, k in enumerate(kraus):
            if k.shape != (dim, dim):
                raise ScenarioError([f"{where}.kraus[{i}]: expected {dim}x{dim}, got {k.shape[0]}x{k.shape[1]}"])
        channel = KrausChannel(np.array(kraus), None, "custom")
        check = validate_channel(channel)
        if not check:
            raise ScenarioError(
                [f"{where}: Kraus completeness sum F^dag F = 1 violated, deviation {check.deviation:.6g}"]
            )
        return channel, {"kind": "custom", "kraus": spec["kraus"]}

    if "kraus" in spec:
        raise ScenarioError([f"{where}.kraus: only allowed for kind custom"])
    kwargs = dict(params)
    if kind == "unitary_error" and "unitary" in kwargs:
        kwargs["unitary"] = _parse_unitary(kwargs["unitary"], dim, f"{where}.params.unitary")
    if kind == "weyl" and "weights" in kwargs:
        w = kwargs["weights"]
        if not (isinstance(w, list) and all(isinstance(r, list) for r in w)):
            raise ScenarioError([f"{where}.params.weights: expected a {dim}x{dim} list of rows"])
    try:
        channel = build_standard_channel(kind, dim, **kwargs)
    except (ValueError, TypeError) as exc:
        raise ScenarioError([f"{where}: {exc}"]) from None
    return channel, {"kind": kind, "params": params}


def _parse_reports(value) -> list:
    if not isinstance(value, list) or not value:
        raise ScenarioError(["reports: expected a non-empty list"])
    reports = []
    for i, item in enumerate(value):
        where = f"reports[{i}]"
        if isinstance(item, str):
            if item not in REPORT_KINDS or item == "angular":
                raise ScenarioError([f"{where}: unknown report {item!r}; angular needs {{\"angular\": j}}"])
            reports.append((item, {}))
            continue
        if not isinstance(item, dict) or len(item) != 1:
            raise ScenarioError([f"{where}: expected a report name or a one-key object"])
        (name, opts), = item.items()
        if name == "angular":
            j = opts.get("j") if isinstance(opts, dict) else opts
            if isinstance(opts, dict) and set(opts) != {"j"}:
                raise ScenarioError([f"{where}.angular: only field j is allowed"])
            try:
                reports.append(("angular", {"j": parse_spin(j)}))
            except ValueError as exc:
                raise ScenarioError([f"{where}.angular: {exc}"]) from None
        elif name == "compare":
            if not isinstance(opts, dict) or set(opts) - {"samples", "seed", "resolve_m"}:
                raise ScenarioError([f"{where}.compare: allowed fields are samples, seed, resolve_m"])
            o = {}
            if "samples" in opts:
                o["samples"] = _int(opts["samples"], f"{where}.compare.samples", 1)
            if "seed" in opts:
                o["seed"] = _int(opts["seed"], f"{where}.compare.seed")
            if "resolve_m" in opts:
                if not isinstance(opts["resolve_m"], bool):
                    raise ScenarioError([f"{where}.compare.resolve_m: expected true or false"])
                o["resolve_m"] = opts["resolve_m"]
            reports.append(("compare", o))
        elif name in ("outcomes", "homogeneity"):
            if opts not in ({}, None):
                raise ScenarioError([f"{where}.{name}: takes no options"])
            reports.append((name, {}))
        else:
            raise ScenarioError([f"{where}: unknown report {name!r}"])
    return reports


def parse_scenario(text: str, base_dir: Path | str | None = None) -> Scenario:
    """Strictly parse a scenario document.  Raises :class:`ScenarioError`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(doc, dict):
        raise ScenarioError(["scenario: top level must be an object"])
    base_dir = Path(base_dir) if base_dir is not None else None

    errors = []
    unknown = set(doc) - SCENARIO_FIELDS
    if unknown:
        errors.append(f"scenario: unknown field(s) {sorted(unknown)}")
    missing = REQUIRED_FIELDS - set(doc)
    if missing:
        errors.append(f"scenario: missing field(s) {sorted(missing)}")
    if "input" in doc and "input_state" in doc:
        errors.append("scenario: give either input or input_state, not both")
    if errors:
        raise ScenarioError(errors)

    dim = _int(doc["dim"], "dim", 2)
    input_spec = doc.get("input_state", doc.get("input", "zero"))
    input_field = "input_state" if "input_state" in doc else "input"

    # Collect independent field errors before giving up.
    results = {}
    for key, fn in (
        ("psi", lambda: _parse_input(input_spec, dim, input_field)),
        ("r", lambda: parse_channel(doc["channel_r"], dim, "channel_r", base_dir)),
        ("b", lambda: parse_channel(doc["channel_b"], dim, "channel_b", base_dir)),
        ("reports", lambda: _parse_reports(doc.get("reports", ["outcomes"]))),
    ):
        try:
            results[key] = fn()
        except ScenarioError as exc:
            errors.extend(exc.messages)

    mode, shots, seed = "exact", None, None
    mode_spec = doc.get("mode", "exact")
    if mode_spec == "exact":
        pass
    elif isinstance(mode_spec, dict) and set(mode_spec) == {"sample"} and isinstance(mode_spec["sample"], dict):
        opts = mode_spec["sample"]
        if set(opts) != {"shots", "seed"}:
            errors.append("mode.sample: fields shots and seed are required")
        else:
            try:
                shots = _int(opts["shots"], "mode.sample.shots", 1)
                seed = _int(opts["seed"], "mode.sample.seed", 0)
                mode = "sample"
            except ScenarioError as exc:
                errors.extend(exc.messages)
    else:
        errors.append('mode: expected "exact" or {"sample": {"shots": n, "seed": s}}')

    accept = None
    acc_spec = doc.get("accept", "all")
    if acc_spec != "all":
        if not isinstance(acc_spec, list) or not acc_spec:
            errors.append('accept: expected "all" or a non-empty list of [a, b] labels')
        else:
            accept = []
            for i, lab in enumerate(acc_spec):
                ok = (
                    isinstance(lab, list)
                    and len(lab) == 2
                    and all(isinstance(v, int) and not isinstance(v, bool) for v in lab)
                )
                if not ok:
                    errors.append(f"accept[{i}]: expected [a, b] with integers, got {lab!r}")
                elif not all(0 <= v < dim for v in lab):
                    errors.append(f"accept[{i}]: label {lab} out of range for dim {dim}")
                else:
                    accept.append(tuple(lab))
            if len(set(accept)) != len(accept):
                errors.append("accept: duplicate labels")

    if errors:
        raise ScenarioError(errors)
    (cr, cr_spec), (cb, cb_spec) = results["r"], results["b"]
    return Scenario(
        dim=dim,
        input_spec=input_spec,
        psi=results["psi"],
        channel_r=cr,
        channel_b=cb,
        channel_r_spec=cr_spec,
        channel_b_spec=cb_spec,
        mode=mode,
        shots=shots,
        seed=seed,
        accept=accept,
        reports=results["reports"],
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), base_dir=path.parent)


# --- serialization --------------------------------------------------------


def cplx(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def cmatrix(a) -> list:
    return [[cplx(z) for z in row] for row in np.asarray(a)]


def _label(m):
    return list(m) if isinstance(m, tuple) else m


def dumps(data: dict) -> str:
    """JSON with shortest round-trip float repr, so reloading is bit-exact."""
    return json.dumps(data, indent=2) + "\n"


# --- execution ------------------------------------------------------------


@dataclass
class RunResult:
    data: dict
    text: str
    violations: list

    @property
    def exit_code(self) -> int:
        return 2 if self.violations else 0


def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _matrix_text(a) -> str:
    rows = []
    for row in np.asarray(a):
        rows.append("  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row))
    return "\n".join("  " + r for r in rows)


def _outcomes_section(s: Scenario, meas, tol_oracle, tol_prob, violations):
    if s.mode == "exact":
        res = enumerate_outcomes(s.psi, s.channel_r, s.channel_b, meas, s.accept)
        oracle = predict_outcomes_via_effective_error(s.psi, s.channel_r, s.channel_b, meas, s.accept)
        dprob, infid = compare_branchwise(res, oracle)
        oracle_ok = dprob < tol_oracle and infid < tol_oracle
        if not oracle_ok:
            violations.append(
                f"outcomes: effective-error prediction disagrees with full simulation "
                f"(|dprob| {dprob:.3e}, infidelity {infid:.3e})"
            )
    else:
        res = sample_outcomes(s.psi, s.channel_r, s.channel_b, meas, s.accept, s.shots, s.seed)
        exact = enumerate_outcomes(s.psi, s.channel_r, s.channel_b, meas, s.accept)
    total = res.total_probability
    if abs(total - 1.0) > tol_prob:
        violations.append(f"outcomes: branch probabilities sum to {total!r}")

    per_m = []
    for m, (pm, rho) in res.per_m_marginals.items():
        f = fidelity(s.psi, rho) if rho is not None else None
        per_m.append({"m": _label(m), "probability": pm, "fidelity": f})
    records = []
    for r in res.records:
        records.append(
            {
                "m": _label(r.m),
                "x_r": r.x_r,
                "x_b": r.x_b,
                "prob": r.prob,
                "raw_norm2": r.raw_norm2,
                "fidelity": fidelity(s.psi, r.output) if r.output is not None else None,
                "output": [cplx(z) for z in r.output] if r.output is not None else None,
            }
        )
    data = {
        "acceptance_probability": res.acceptance_probability,
        "total_probability": total,
        "average_fidelity": fidelity(s.psi, res.averaged_output),
        "per_m": per_m,
        "averaged_output": cmatrix(res.averaged_output),
        "records": records,
    }
    if res.complete:
        data["premessage_marginal"] = cmatrix(res.premessage_marginal)
    if s.mode == "exact":
        data["oracle"] = {"max_prob_difference": dprob, "max_infidelity": infid, "ok": oracle_ok}
    else:
        exact_m = exact.m_marginal()
        tv = 0.5 * sum(abs(res.m_marginal()[m] - exact_m[m]) for m in exact_m)
        data["sampling"] = {
            "shots": s.shots,
            "seed": s.seed,
            "exact_m_marginal": [{"m": _label(m), "probability": p} for m, p in exact_m.items()],
            "tv_distance": tv,
            "tv_bound": 5 * np.sqrt(s.dim**2 / s.shots),
        }

    lines = ["== outcomes (" + ("exact" if s.mode == "exact" else f"sampled, {s.shots} shots") + ")"]
    lines.append(
        _table(
            ["m", "probability", "fidelity"],
            [
                (tuple(e["m"]), f"{e['probability']:.6f}", "-" if e["fidelity"] is None else f"{e['fidelity']:.6f}")
                for e in per_m
            ],
        )
    )
    lines.append(f"acceptance probability: {res.acceptance_probability:.6f}")
    lines.append(f"average fidelity:       {data['average_fidelity']:.6f}")
    lines.append("averaged output:")
    lines.append(_matrix_text(res.averaged_output))
    if s.mode == "exact":
        lines.append(
            f"effective-error check: |dprob| {dprob:.2e}, infidelity {infid:.2e} -> "
            + ("ok" if oracle_ok else "MISMATCH")
        )
    else:
        sm = data["sampling"]
        lines.append(f"m-marginal TV distance to exact: {sm['tv_distance']:.4f} (bound {sm['tv_bound']:.4f})")
    return data, "\n".join(lines)


def _compare_section(s, meas, opts, tol, violations):
    rep = compare_teleport_vs_direct(
        s.channel_r,
        s.channel_b,
        meas,
        samples=opts.get("samples", 10_000),
        seed=opts.get("seed", 0),
        tol=tol,
        resolve_m=opts.get("resolve_m", True),
    )
    if rep.verdict == VERDICT_MISMATCH:
        violations.append(
            f"compare: teleportation and direct transmission disagree "
            f"(fidelity deviation {rep.max_fidelity_deviation:.3e})"
        )
    data = rep.to_dict()
    data["samples"] = rep.n_inputs
    data["seed"] = opts.get("seed", 0)
    lines = [f"== teleportation vs direct transmission ({rep.n_inputs} Haar inputs)"]
    lines.append(
        _table(
            ["quantity", "teleport", "direct"],
            [
                ("average fidelity", f"{rep.avg_fidelity_teleport:.12f}", f"{rep.avg_fidelity_direct:.12f}"),
                (
                    "entanglement fidelity",
                    f"{rep.entanglement_fidelity_teleport:.12f}",
                    f"{rep.entanglement_fidelity_direct:.12f}",
                ),
            ],
        )
    )
    lines.append(f"direct without outcome frame:  {rep.avg_fidelity_direct_plain:.12f}")
    lines.append(f"direct with untransposed R:    {rep.avg_fidelity_direct_untransposed:.12f}")
    lines.append(
        _table(
            ["m", "probability", "fidelity"],
            [
                (m, f"{rep.per_m_probability[m]:.6f}", "-" if f is None else f"{f:.6f}")
                for m, f in rep.per_m_fidelity.items()
            ],
        )
    )
    lines.append(f"max deviation: {rep.max_fidelity_deviation:.2e}   verdict: {rep.verdict}")
    for w in rep.warnings:
        lines.append(f"warning: {w}")
    return data, "\n".join(lines)


def _homogeneity_section(s, meas):
    data = {}
    rows = []
    for name, c in (("channel_r", s.channel_r), ("channel_b", s.channel_b)):
        rep = homogeneity_report(c, meas)
        data[name] = {
            "covariant_under_weyl": rep.covariant_under_weyl,
            "transpose_homogeneous": rep.transpose_homogeneous,
            "predicts_m_independent": rep.predicts_m_independent,
            "residual": rep.residual,
            "witnesses": [
                {
                    "transform": w.transform,
                    "permutation": list(w.permutation) if w.permutation is not None else None,
                    "phases": [cplx(p) for p in w.phases] if w.phases is not None else None,
                    "residual": w.residual,
                    "ambiguous": list(w.ambiguous),
                }
                for w in rep.permutation_witness
            ],
        }
        rows.append((name, c.name, rep.covariant_under_weyl, rep.transpose_homogeneous, rep.predicts_m_independent))
    text = "== homogeneity\n" + _table(
        ["line", "channel", "covariant", "transpose", "m-independent"], rows
    )
    return data, text


def _angular_section(opts, tol, violations):
    rep = angular_momentum_transpose_report(opts["j"])
    ok = max(v for _, v in rep.rows()) < tol
    if not ok:
        violations.append(f"angular: transposition norms exceed {tol:g} for j = {rep.j}")
    data = {
        "j": str(rep.j),
        "dim": rep.dim,
        "lx_transpose_minus_lx": rep.lx_change,
        "ly_transpose_plus_ly": rep.ly_sign_flip,
        "lz_transpose_minus_lz": rep.lz_change,
        "ok": ok,
    }
    text = f"== angular momentum transposition, j = {rep.j}\n" + _table(
        ["quantity", "norm"], [(q, f"{v:.3e}") for q, v in rep.rows()]
    )
    return data, text


def run_scenario(s: Scenario, tol_override: float | None = None) -> RunResult:
    """Execute every requested report; invariant violations are collected, not raised."""
    meas = BellMeasurement.weyl(s.dim)
    violations: list[str] = []
    tol = lambda default: default if tol_override is None else float(tol_override)

    data = {
        "scenario": {
            "dim": s.dim,
            "input_state": [cplx(z) for z in s.psi],
            "channel_r": s.channel_r_spec,
            "channel_b": s.channel_b_spec,
            "mode": "exact" if s.mode == "exact" else {"sample": {"shots": s.shots, "seed": s.seed}},
            "accept": "all" if s.accept is None else [list(m) for m in s.accept],
        }
    }
    sections = []
    angular = []
    for name, opts in s.reports:
        if name == "outcomes":
            d, t = _outcomes_section(s, meas, tol(TOL_ORACLE), tol(TOL_PROB), violations)
        elif name == "compare":
            d, t = _compare_section(s, meas, opts, tol(TOL_COMPARE), violations)
        elif name == "homogeneity":
            d, t = _homogeneity_section(s, meas)
        else:
            d, t = _angular_section(opts, tol(TOL_ANGULAR), violations)
            angular.append(d)
            sections.append(t)
            continue
        data[name] = d
        sections.append(t)
    if angular:
        data["angular"] = angular
    data["violations"] = violations
    data["status"] = "violation" if violations else "ok"
    return RunResult(data, "\n\n".join(sections), violations)
