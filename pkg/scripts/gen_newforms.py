"""Generate the frozen weight-3 newform tables from eta products.

f8  = eta(t)^2 eta(2t) eta(4t) eta(8t)^2
f12 = eta(2t)^3 eta(6t)^3
f16 = eta(4t)^6
"""
import sys
from pathlib import Path

TERMS = 1200

SPECS = {
    "f8": (8, {1: 2, 2: 1, 4: 1, 8: 2}),
    "f12": (12, {2: 3, 6: 3}),
    "f16": (16, {4: 6}),
}


def eta_product(spec, n):
    """Coefficients of q^0..q^(n-1) of prod_d prod_k (1-q^(dk))^e times q^shift."""
    shift = sum(d * e for d, e in spec.items())
    assert shift % 24 == 0
    shift //= 24
    c = [0] * n
    c[0] = 1
    for d, e in spec.items():
        for _ in range(abs(e)):
            for k in range(1, n // d + 1):
                step = d * k
                if e > 0:
                    for i in range(n - 1, step - 1, -1):
                        c[i] -= c[i - step]
                else:
                    for i in range(step, n):
                        c[i] += c[i - step]
    out = [0] * n
    for i in range(n - shift):
        out[i + shift] = c[i]
    return out


def main(path):
    lines = ["# label, level, weight, a1..an (frozen from eta products)"]
    for label, (level, spec) in SPECS.items():
        a = eta_product(spec, TERMS + 1)
        lines.append(", ".join([label, str(level), "3"] + [str(v) for v in a[1:]]))
    Path(path).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/modmahler/data/newforms.txt")
