"""Radial scans for the standard integrands; writes one JSON and one CSV report each."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from iwasawa_lab.cli import scan_csv
from iwasawa_lab.closed_forms import GroupSpec, RankOneParams
from iwasawa_lab.integrators import IntegrandSpec, radial_scan


@dataclass
class ScanConfig:
    radii: list[float] = field(default_factory=lambda: [10.0, 1e2, 1e3, 1e4])
    samples: int = 1_000_000
    seed: int = 1
    workers: int = 1
    out: Path = Path("reports")


CASES = {
    "sl2_undamped": IntegrandSpec(GroupSpec("sl", 2)),
    "sl3_undamped": IntegrandSpec(GroupSpec("sl", 3)),
    "sl3_damped": IntegrandSpec(GroupSpec("sl", 3), log_power=-3.5),
    "sl4_commutator": IntegrandSpec(GroupSpec("sl", 4), "commutator", log_power=2.0),
    "sl4_commutator_alpha": IntegrandSpec(GroupSpec("sl", 4), "commutator", alpha=0.5, log_power=2.0),
    "sp4_commutator": IntegrandSpec(GroupSpec("sp4"), "commutator", log_power=2.0),
    "so3_commutator": IntegrandSpec(GroupSpec("so", 3), "commutator", log_power=2.0),
    "su21_commutator": IntegrandSpec(GroupSpec("rank1", rank_one=RankOneParams(2, 1)), "commutator", log_power=3.0),
}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("cases", nargs="*", default=list(CASES), help="any of: " + ", ".join(CASES))
    p.add_argument("--samples", type=int, default=ScanConfig.samples)
    p.add_argument("--seed", type=int, default=ScanConfig.seed)
    p.add_argument("--workers", type=int, default=ScanConfig.workers)
    p.add_argument("--out", type=Path, default=ScanConfig.out)
    args = p.parse_args()
    unknown = set(args.cases) - set(CASES)
    if unknown:
        p.error(f"unknown cases: {', '.join(sorted(unknown))}")
    cfg = ScanConfig(samples=args.samples, seed=args.seed, workers=args.workers, out=args.out)
    cfg.out.mkdir(parents=True, exist_ok=True)
    for name in args.cases:
        rep = radial_scan(CASES[name], cfg.radii, cfg.samples, cfg.seed, workers=cfg.workers)
        (cfg.out / f"{name}.json").write_text(json.dumps(rep.to_dict(), sort_keys=True, indent=2) + "\n")
        (cfg.out / f"{name}.csv").write_text(scan_csv(rep))
        inc = " ".join(f"{x:10.4g}" for x in rep.increments)
        print(f"{name:22s} {rep.classification:16s} increments {inc}  last/total {rep.increments[-1] / rep.estimates[-1]:.3f}")


if __name__ == "__main__":
    main()
