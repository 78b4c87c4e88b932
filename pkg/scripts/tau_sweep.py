"""Large-tau sweep of the six-state model against the semiclassical product, for several horizon sets."""

import argparse
from dataclasses import dataclass, field

import numpy as np

from mlzbench.models import build_h6
from mlzbench.propagator import tau_sweep
from mlzbench.semiclassical import predict_probabilities


@dataclass
class Config:
    g: float = 0.105
    tau0: list = field(default_factory=lambda: [1.0, 2.0, 4.0])
    # (T_min, T_max, count) geometric horizon sets
    horizons: list = field(default_factory=lambda: [(200.0, 400.0, 5), (200.0, 400.0, 33), (400.0, 800.0, 33)])


def run(cfg):
    model = build_h6(1.0, 1.5, 1.0, cfg.g)
    ref = predict_probabilities(model).probability
    print("horizons               " + "  ".join(f"tau0={t:<6g}" for t in cfg.tau0))
    for lo, hi, count in cfg.horizons:
        T_list = np.geomspace(lo, hi, count)
        devs = [np.max(np.abs(r.probability - ref)) for _, r in tau_sweep(model, cfg.tau0, T_list)]
        print(f"[{lo:g}, {hi:g}] x {count:<3d}       " + "  ".join(f"{d:.2e}   " for d in devs))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, default=Config.g)
    run(Config(g=ap.parse_args().g))
