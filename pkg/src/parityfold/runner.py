"""Config-driven experiment runner producing deterministic reports.

A config names a corpus of functions and a list of analyses; the report
echoes the config and holds one result block per (function, analysis).
Reports are byte-identical across runs with the same config and seeds,
so they carry no wall-clock data (the CLI prints timing to stderr).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import folding, pdt, spectral
from .families import FunctionSpec, build_function
from .spectral import TruthTable, load_function

VERSION = "0.1.0"
DEFAULT_MAX_N = 20


class ConfigError(ValueError):
    pass


def parse_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ConfigError(f"expected a number, got {value!r}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad fraction {value!r}: {exc}") from None
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    raise ConfigError(f"expected a number, got {value!r}")


def load_config(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config


def _resolve_function(entry: dict, base_dir: Path, max_n: int) -> tuple[str, TruthTable]:
    if "path" in entry:
        path = base_dir / entry["path"]
        loaded = load_function(path)
        if isinstance(loaded, spectral.FourierSpectrum):
            loaded = spectral.inverse_wht(loaded)
        label = str(entry["path"])
    elif "family" in entry:
        params = {key: value for key, value in entry.items() if key != "family"}
        spec = FunctionSpec(entry["family"], params)
        loaded = build_function(spec)
        label = spec.label()
    else:
        raise ConfigError(f"function entry needs 'family' or 'path': {entry!r}")
    if loaded.n > max_n:
        raise ConfigError(f"{label}: n = {loaded.n} exceeds max_n = {max_n}")
    return label, loaded


def analyze_summary(spectrum: spectral.FourierSpectrum) -> dict:
    l1 = spectral.spectral_l1(spectrum)
    return {
        "sparsity": spectrum.sparsity,
        "support": sorted(spectrum.coeffs),
        "plateaued": spectral.is_plateaued(spectrum),
        "granular": spectral.granularity_check(spectrum),
        "l1": str(l1),
        "l1_squared_le_sparsity": l1**2 <= spectrum.sparsity,
        "parseval": spectral.verify_parseval(spectrum),
        "titsworth_violations": spectral.verify_titsworth(spectrum),
    }


def fold_summary(spectrum: spectral.FourierSpectrum, params: dict) -> dict:
    ell = parse_fraction(params.get("ell", "1/2"))
    profile = folding.direction_classes(
        spectrum.support(), include_pairs=bool(params.get("pairs", False))
    )
    fp = folding.folding_parameters(spectrum.support(), ell)
    out = {
        "profile": profile.to_dict(),
        "ell": str(fp.ell),
        "delta": str(fp.delta),
        "heavy_pair_count": fp.heavy_pair_count,
        "class_size_threshold": fp.class_size_threshold,
    }
    if "delta" in params:
        delta = parse_fraction(params["delta"])
        members = folding.heavy_participants(spectrum.support(), delta, ell)
        out["heavy_participants"] = sorted(members)
    return out


def verify_summary(spectrum: spectral.FourierSpectrum, params: dict) -> dict:
    check = params.get("check")
    if check == "pair-condition":
        result = folding.check_pair_condition(spectrum.support())
        return {"check": check, "passed": result.ok, "violation": result.violation}
    if check == "three-fold":
        try:
            witnesses = folding.verify_three_fold(spectrum)
        except folding.ThreeFoldViolationError as exc:
            return {"check": check, "passed": False, "missing": exc.missing}
        return {
            "check": check,
            "passed": True,
            "witnesses": {str(a): b for a, b in sorted(witnesses.items())},
        }
    if check == "single-direction":
        try:
            report = folding.single_direction_structure(spectrum)
        except folding.SingleDirectionViolationError as exc:
            return {"check": check, "passed": False, "error": str(exc)}
        return {"check": check, "passed": True, "report": report.to_dict()}
    if check == "sign-feasibility":
        result = folding.sign_feasibility(spectrum.support())
        return {"check": check, "passed": result.feasible, "detail": result.to_dict()}
    if check == "titsworth":
        violations = spectral.verify_titsworth(spectrum)
        return {"check": check, "passed": not violations, "violations": violations}
    if check == "parseval":
        return {"check": check, "passed": spectral.verify_parseval(spectrum)}
    raise ConfigError(f"unknown verify check {check!r}")


def pdt_summary(table: TruthTable, params: dict, seed: int) -> dict:
    config = pdt.BuildConfig(
        strategy=params.get("strategy", "sampling"),
        probability=(
            float(parse_fraction(params["probability"]))
            if "probability" in params
            else None
        ),
        resample_cap=int(params.get("resample_cap", 64)),
        epsilon=parse_fraction(params.get("epsilon", "1/2")),
        seed=int(params.get("seed", seed)),
        delta=parse_fraction(params["delta"]) if "delta" in params else None,
        ell=parse_fraction(params["ell"]) if "ell" in params else None,
    )
    result = pdt.build_pdt(table, config)
    verified = pdt.verify_tree(result.tree, table)
    return {
        "strategy": config.strategy,
        "seed": config.seed,
        "depth": result.depth(),
        "verified": verified,
        "node_records": [r.to_dict() for r in result.log],
    }


def mc_summary(table: TruthTable, params: dict, seed: int) -> dict:
    kind = params.get("kind")
    trials = int(params.get("trials", 100))
    used_seed = int(params.get("seed", seed))
    if kind == "theorem-1":
        p = float(parse_fraction(params["p"]))
        stats = pdt.estimate_bucket_reduction(table, p, trials, used_seed)
    elif kind == "warmup":
        stats = pdt.warmup_success_rate(table, trials, used_seed)
    elif kind == "theorem-2":
        stats = pdt.folding_sampling_trial(
            table,
            parse_fraction(params.get("delta", 1)),
            parse_fraction(params.get("ell", 0)),
            trials,
            used_seed,
        )
    else:
        raise ConfigError(f"unknown mc kind {kind!r}")
    return {"kind": kind, "seed": used_seed, "stats": stats.to_dict()}


@dataclass(frozen=True)
class ExperimentReport:
    version: str
    config: dict
    results: list[dict]

    def to_dict(self) -> dict:
        return {"version": self.version, "config": self.config, "results": self.results}

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_csv(self) -> str:
        lines = ["function,op,field,value"]
        for block in self.results:
            for op_result in block["analyses"]:
                flat = _flatten(op_result.get("result", {}))
                for key in sorted(flat):
                    value = str(flat[key]).replace(",", ";")
                    lines.append(f"{block['function']},{op_result['op']},{key},{value}")
        return "\n".join(lines) + "\n"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _flatten(obj, prefix: str = "") -> dict:
    out: dict = {}
    if isinstance(obj, dict):
        for key, value in obj.items():
            out.update(_flatten(value, f"{prefix}{key}."))
    elif isinstance(obj, list):
        out[prefix.rstrip(".") + ".length"] = len(obj)
    else:
        out[prefix.rstrip(".")] = obj
    return out


def run_experiment(config: dict, base_dir: str | Path = ".") -> ExperimentReport:
    base_dir = Path(base_dir)
    seed = int(config.get("seed", 0))
    max_n = int(config.get("max_n", DEFAULT_MAX_N))
    functions = config.get("functions", [])
    analyses = config.get("analyses", [])
    if not isinstance(functions, list) or not isinstance(analyses, list):
        raise ConfigError("'functions' and 'analyses' must be lists")
    results: list[dict] = []
    for entry in functions:
        label, table = _resolve_function(entry, base_dir, max_n)
        spectrum = spectral.wht(table)
        block = {"function": label, "n": table.n, "analyses": []}
        for analysis in analyses:
            op = analysis.get("op")
            params = {key: value for key, value in analysis.items() if key != "op"}
            if op == "analyze":
                result = analyze_summary(spectrum)
            elif op == "fold":
                result = fold_summary(spectrum, params)
            elif op == "verify":
                result = verify_summary(spectrum, params)
            elif op == "pdt":
                result = pdt_summary(table, params, seed)
            elif op == "mc":
                result = mc_summary(table, params, seed)
            else:
                raise ConfigError(f"unknown analysis op {op!r}")
            block["analyses"].append({"op": op, "result": result})
        results.append(block)
    return ExperimentReport(VERSION, config, results)
