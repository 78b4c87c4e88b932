"""Recover the five-state integrability constraint by scanning the free coupling g3."""

import argparse
from dataclasses import dataclass

import numpy as np

from mlzbench.integrability import scan_parameter
from mlzbench.models import build_h5_ansatz, h5_g3


@dataclass
class Config:
    e1: float = 1.0
    e2: float = 1.0
    b: float = 1.0
    g1: float = 0.15
    g2: float = 0.25
    lo: float = 0.0
    hi: float = 1.0
    steps: int = 41


def run(cfg):
    builder = lambda g3: build_h5_ansatz(cfg.e1, cfg.e2, cfg.b, cfg.g1, cfg.g2, g3)  # noqa: E731
    res = scan_parameter(builder, "g3", np.linspace(cfg.lo, cfg.hi, cfg.steps))
    print("   g3        residual/scale")
    for v, r in zip(res.values, res.residuals):
        print(f"{v:8.4f}   {r:.3e}")
    expected = h5_g3(cfg.g1, cfg.g2)
    for x, r in res.roots:
        print(f"root g3 = {x:.9f} (residual {r:.1e}); sqrt(2 (g2^2 - g1^2)) = {expected:.9f}, "
              f"error {abs(x - expected):.1e}")
    if not res.roots:
        print("no root on this grid")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g1", type=float, default=Config.g1)
    ap.add_argument("--g2", type=float, default=Config.g2)
    ap.add_argument("--steps", type=int, default=Config.steps)
    a = ap.parse_args()
    run(Config(g1=a.g1, g2=a.g2, steps=a.steps))
