"""Decay of the integral of psi along rays in u, for both fields."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

import numpy as np

from iwasawa_lab.inequalities import psi_decay_check, psi_integral


@dataclass
class PsiConfig:
    m: int = 2
    alpha: float = 0.5
    eps: float = 0.5
    norms: list[float] = field(default_factory=lambda: [1.0, 3.0, 10.0, 30.0, 100.0])
    samples: int = 1_000_000
    seed: int = 1


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--m", type=int, default=PsiConfig.m)
    p.add_argument("--alpha", type=float, default=PsiConfig.alpha)
    p.add_argument("--samples", type=int, default=PsiConfig.samples)
    p.add_argument("--seed", type=int, default=PsiConfig.seed)
    args = p.parse_args()
    cfg = PsiConfig(m=args.m, alpha=args.alpha, samples=args.samples, seed=args.seed)
    direction = np.ones(cfg.m) / np.sqrt(cfg.m)
    for fld in ("R", "C"):
        print(f"F = {fld}")
        for k, s in enumerate(cfg.norms):
            r = psi_integral(s * direction, cfg.alpha, cfg.samples, cfg.seed, field=fld, stream=k)
            print(f"  |u| = {s:6g}   integral {r.mean:.5g} +- {r.stderr:.2g}")
        rep = psi_decay_check(direction, cfg.alpha, cfg.eps, cfg.samples, cfg.seed, field=fld)
        print(f"  fitted slope {rep.details['slope']:.4f}, allowed {rep.lhs:.4f}, holds {rep.all_hold}\n")


if __name__ == "__main__":
    main()
