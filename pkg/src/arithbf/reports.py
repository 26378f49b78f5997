"""JSON-ready report dictionaries and their text rendering.

Key order is fixed by construction; floats appear only under ``display_float``.
"""

from __future__ import annotations

import json
import time
from dataclasses import replace
from typing import Optional

from .bf_av import AVInstance, AVModel, build_av_instance, kernel_size, path_integral_av
from .bf_gm import FieldData, GMInstance, path_integral_gm
from .pathsum import DEFAULT_PAIR_BUDGET, PathIntegralReport
from .quadforms import ClassGroup, enumerate_reduced, unit_data

TIMING_KEYS = ("elapsed_seconds",)

INGESTED_NOTE = (
    "field data was ingested and checked for internal consistency only; "
    "it is not verified to describe an actual number field"
)
EXTERNAL_NOTE = "orders labeled as externally sourced; not verified by this tool"


def _display(report: PathIntegralReport) -> Optional[dict]:
    z = report.float_value
    if z is None:
        return None
    return {"re": round(z.real, 9) + 0.0, "im": round(z.imag, 9) + 0.0}


def _brute(report: PathIntegralReport) -> Optional[dict]:
    if report.brute_force_value is None:
        return None
    return {
        "value": report.brute_force_value,
        "phase_counts": list(report.phase_vector.counts),
        "display_float": _display(report),
    }


def classgroup_dict(cg: ClassGroup) -> dict:
    forms = enumerate_reduced(cg.D)
    return {
        "kind": "classgroup",
        "discriminant": cg.D,
        "class_number": cg.order,
        "invariant_factors": list(cg.structure.factors),
        "generators": [[f.a, f.b, f.c] for f in cg.generators],
        "reduced_forms": [[f.a, f.b, f.c] for f in forms],
        "roots_of_unity_order": unit_data(cg.D),
    }


def field_dict(field: FieldData, ingested: bool) -> dict:
    return {
        "label": field.label,
        "class_group_invariants": list(field.cl.factors),
        "unit_rank": field.unit_rank,
        "roots_of_unity_order": field.w,
        "degree": field.degree,
        "source": "ingested" if ingested else "native",
    }


def gm_dict(
    field: FieldData,
    report: PathIntegralReport,
    *,
    mode: str,
    shortcut: bool,
    ingested: bool,
    elapsed: float,
) -> dict:
    h = report.extra["cohomology_orders"]
    out = {
        "kind": "gm",
        "field": field_dict(field, ingested),
        "n": report.n,
        "mode": mode,
        "unit_shortcut": shortcut,
        "cohomology_orders": {"H0": h[0], "H1": h[1], "H2": h[2], "H3": h[3]},
        "closed_form": {
            "value": report.closed_form_value,
            "factors": {
                "n_cl_n2": report.factors[0],
                "units_mod_n": report.factors[1],
                "cl_mod_n": report.factors[2],
            },
            "stabilized_value": report.extra["stabilized_value"],
        },
        "brute_force": _brute(report),
        "etale_count": report.extra["etale_count"],
        "pair_count": report.pair_count,
        "match": report.match,
        "notes": [INGESTED_NOTE] if ingested else [],
        "elapsed_seconds": round(elapsed, 6),
    }
    return out


def model_dict(model: AVModel) -> dict:
    if isinstance(model.delta, str):
        delta = model.delta
    elif isinstance(model.delta, int):
        delta = {"seed": model.delta}
    else:
        delta = {"matrix": [list(r) for r in model.delta]}
    return {
        "n": model.n,
        "mw_a": list(model.mw_a.factors),
        "mw_b": list(model.mw_b.factors),
        "sha_a": list(model.sha_a.factors),
        "sha_b": list(model.sha_b.factors),
        "delta": delta,
    }


def av_dict(inst: AVInstance, report: PathIntegralReport, *, elapsed: float) -> dict:
    model = inst.model
    notes = []
    if model.label or model.source:
        notes.append(EXTERNAL_NOTE)
    return {
        "kind": "av",
        "model": model_dict(model),
        "label": model.label,
        "source": model.source,
        "n": report.n,
        "delta_bar": [list(r) for r in inst.delta_bar],
        "kernel_size": kernel_size(inst),
        "closed_form": {
            "value": report.closed_form_value,
            "symmetric_value": report.extra["symmetric_closed_form_value"],
            "factors": {
                "mw_a": report.factors[0],
                "mw_b": report.factors[1],
                "sha_a": report.factors[2],
            },
        },
        "brute_force": _brute(report),
        "pair_count": report.pair_count,
        "match": report.match,
        "notes": notes,
        "elapsed_seconds": round(elapsed, 6),
    }


def mask_timing(d: dict) -> dict:
    return {k: ("<masked>" if k in TIMING_KEYS else v) for k, v in d.items()}


def to_json(d: dict) -> str:
    return json.dumps(d, indent=2)


def to_text(d: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(to_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def gm_report(
    field: FieldData,
    n: int,
    *,
    mode: str = "both",
    shortcut: bool = True,
    jobs: int = 1,
    budget: int = DEFAULT_PAIR_BUDGET,
    ingested: bool = False,
) -> dict:
    start = time.perf_counter()
    report = path_integral_gm(GMInstance(field, n), mode=mode, shortcut=shortcut, jobs=jobs, budget=budget)
    return gm_dict(
        field, report, mode=mode, shortcut=shortcut, ingested=ingested,
        elapsed=time.perf_counter() - start,
    )


def av_report(
    model: AVModel, *, jobs: int = 1, budget: int = DEFAULT_PAIR_BUDGET, corrupt_pairing: bool = False
) -> dict:
    start = time.perf_counter()
    inst = build_av_instance(model)
    if corrupt_pairing:
        inst = replace(inst, corrupt_pairing=True)
    report = path_integral_av(inst, jobs=jobs, budget=budget)
    return av_dict(inst, report, elapsed=time.perf_counter() - start)
