#!/usr/bin/env python3
"""Regenerates presets/{paper,desk}/*.json.

Horizons: circle and sphere use the published ones for beta = 0; every other
case trains to 0.8 and displays to 0.9 of the radial collapse time of the
matching circle/sphere (scaled by the smallest semi-axis for the ellipsoid).
Collapse times come from `hmcf oracle <kind> 1 <r1> <beta>`.
"""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "presets"

# RK4 collapse times for r0 = 1, keyed by (kind, r1, beta).
COLLAPSE = {
    ("curve", 0, 0): 1.2530, ("curve", 0, 1): 1.4986, ("curve", 0, 3): 2.1722, ("curve", 0, 5): 3.0053,
    ("curve", 1, 0): 3.4768, ("curve", 1, 1): 2.9494, ("curve", 1, 3): 3.3388, ("curve", 1, 5): 4.1053,
    ("curve", -1, 0): 0.6554, ("curve", -1, 1): 0.8121, ("curve", -1, 3): 1.3373, ("curve", -1, 5): 2.1053,
    ("sphere", 0, 0): 0.8860, ("sphere", 0, 1): 1.0041, ("sphere", 0, 3): 1.3077, ("sphere", 0, 5): 1.6861,
    ("sphere", 1, 0): 1.7300, ("sphere", 1, 1): 1.6934, ("sphere", 1, 3): 1.8904, ("sphere", 1, 5): 2.2361,
    ("sphere", -1, 0): 0.5454, ("sphere", -1, 1): 0.6343, ("sphere", -1, 3): 0.8869, ("sphere", -1, 5): 1.2360,
}

PUBLISHED = {
    ("circle", 0): (1.1, 1.2), ("circle", 1): (3.3, 3.4),
    ("sphere", 0): (0.7, 0.8), ("sphere", 1): (1.5, 1.65),
}

BETAS = [0, 1, 3, 5]

GEOMETRY = {
    "circle": {"type": "circle", "r0": 1.0},
    "ellipse": {"type": "ellipse", "a": 1.5, "b": 1.0},
    "sphere": {"type": "sphere", "r0": 1.0},
    "ellipsoid": {"type": "ellipsoid", "a": 1.5, "b": 1.0, "c": 0.5},
    "torus": {"type": "torus", "R": 2.0, "r": 1.0},
}

# (label, profile, r1)
CONSTANT = [("r1_0", "constant", 0), ("r1_1", "constant", 1), ("r1_m1", "constant", -1)]
PROFILES = [("sin_u", "sin_u", 1), ("cos_u", "cos_u", 1)]

CASES = {
    "circle": CONSTANT[:2],
    "ellipse": CONSTANT + PROFILES,
    "sphere": CONSTANT[:2],
    "ellipsoid": CONSTANT,
    "torus": CONSTANT,
}

SCALES = {
    "paper": {
        "curve": {"network": {"hidden_layers": 7, "hidden_width": 50},
                  "sampling": {"n_f": 20000, "n_0": 200, "n_b": 200},
                  "schedule": {"adam1_steps": 20000, "adam1_lr": 1e-3, "adam2_steps": 60000, "adam2_lr": 1e-4,
                               "lbfgs_iters": 500, "warmup_steps": 2000, "warmup_weight": 100}},
        "surface": {"network": {"hidden_layers": 6, "hidden_width": 100},
                    "sampling": {"n_f": 20000, "n_0": 200, "n_b": 200, "n_p": 200},
                    "schedule": {"adam_steps": 100000, "max_lr": 1e-3, "tier1_end": 10000, "tier2_end": 20000,
                                 "tier_weight": 1000, "tier_decay": 0.1, "lbfgs_iters": 500}},
    },
    "desk": {
        "curve": {"network": {"hidden_layers": 5, "hidden_width": 25},
                  "sampling": {"n_f": 5000, "n_0": 100, "n_b": 100},
                  "schedule": {"adam1_steps": 10000, "adam1_lr": 1e-3, "adam2_steps": 5000, "adam2_lr": 1e-4,
                               "lbfgs_iters": 200, "warmup_steps": 2000, "warmup_weight": 100}},
        "surface": {"network": {"hidden_layers": 4, "hidden_width": 50},
                    "sampling": {"n_f": 4000, "n_0": 100, "n_b": 100, "n_p": 100},
                    "schedule": {"adam_steps": 15000, "max_lr": 1e-3, "tier1_end": 1500, "tier2_end": 3000,
                                 "tier_weight": 1000, "tier_decay": 0.1, "lbfgs_iters": 100}},
    },
}


def horizon(shape, r1, beta):
    if beta == 0 and (shape, r1) in PUBLISHED:
        return PUBLISHED[(shape, r1)]
    kind = "curve" if shape in ("circle", "ellipse", "torus") else "sphere"
    tc = COLLAPSE[(kind, r1, beta)]
    if shape == "ellipsoid":
        tc *= 0.5
    return round(0.8 * tc, 2), round(0.9 * tc, 2)


def main():
    for scale, budgets in SCALES.items():
        out = ROOT / scale
        out.mkdir(parents=True, exist_ok=True)
        for shape, cases in CASES.items():
            family = "curve" if shape in ("circle", "ellipse") else "surface"
            for label, profile, r1 in cases:
                for beta in BETAS:
                    # Profiles other than constant have no radial reduction; reuse the r1 = 0 horizon.
                    train, display = horizon(shape, r1 if profile == "constant" else 0, beta)
                    name = f"{shape}_{label}_b{beta}"
                    doc = {
                        "geometry": GEOMETRY[shape],
                        "velocity": {"profile": profile, "r1": float(r1)},
                        "beta": float(beta),
                        "time": {"train": train, "display": display},
                        **json.loads(json.dumps(budgets[family])),
                        "seeds": {"init": 1, "sample": 2},
                        "output_dir": f"runs/{scale}/{name}",
                    }
                    (out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
