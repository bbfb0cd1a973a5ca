"""Tables for the one-dimensional log-damped and beta-decay integrals."""

from __future__ import annotations

import math

from iwasawa_lab.integrators import beta_decay_1d, log_lemma_1d


def main() -> None:
    print(f"{'F':>2} {'eps':>5} {'head':>10} {'tail':>10} {'bound':>10} {'total':>12}")
    for fld in ("R", "C"):
        for eps in (0.1, 0.25, 0.5, 1.0, 2.0):
            r = log_lemma_1d(eps, fld)
            print(f"{fld:>2} {eps:5g} {r.head:10.6f} {r.tail:10.6f} {r.tail_bound:10.6f} {r.total:12.8f}")
    print()
    print(f"{'F':>2} {'beta':>5} {'a':>7} {'integral':>11} {'bound':>11} {'ratio':>7} {'(1+a^2)^(b/2) * I':>18}")
    for fld in ("R", "C"):
        for beta in (0.25, 0.5, 0.9):
            for a in (1.0, 10.0, 100.0, 1e4):
                r = beta_decay_1d(a, beta, fld)
                scaled = r.estimate * (1 + a * a) ** (beta / 2)
                print(f"{fld:>2} {beta:5g} {a:7g} {r.estimate:11.6g} {r.bound:11.6g} {r.estimate / r.bound:7.3f} {scaled:18.6g}")
    print(f"\ncomplex log lemma total is pi / eps: eps=1 gives {math.pi:.12f}")


if __name__ == "__main__":
    main()
