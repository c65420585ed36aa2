"""TSV tables and matplotlib figures for verification reports."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _rows(rep):
    rows = [
        ("case", rep.case),
        ("lhs", repr(rep.lhs)),
        ("lhs_error", repr(rep.lhs_error)),
        ("rhs", repr(rep.rhs)),
        ("rhs_exact", rep.rhs_string()),
        ("expected", rep.expected),
        ("expected_value", repr(rep.expected_value)),
        ("rhs_matches_expected", rep.rhs_matches_expected),
        ("diff", repr(rep.diff)),
        ("rel_diff", repr(rep.rel_diff)),
        ("tolerance", rep.tolerance),
        ("passed", rep.passed),
        ("sign", rep.sign),
        ("jensen_integral", repr(rep.jensen_integral)),
        ("identification", rep.identification),
    ]
    rows += [("fricke_%s" % k, v) for k, v in sorted(rep.fricke.items())]
    rows += [("gate_%s" % k, v) for k, v in rep.gates.items()]
    rows += [("time_%s" % k, "%.3f" % v) for k, v in rep.timings.items()]
    rows += [("budget_%s" % k, v) for k, v in rep.budget.items()]
    return rows


def write_case_tsv(rep, path):
    with open(path, "w") as fh:
        fh.write("key\tvalue\n")
        for k, v in _rows(rep):
            fh.write("%s\t%s\n" % (k, str(v).replace("\t", " ")))
        fh.write("\nlevel_n\ttrapezoid\n")
        for n, v in rep.mahler_levels:
            fh.write("%d\t%r\n" % (n, v))
        if rep.qexp:
            fh.write("\nn\tcoefficient_of_F(tau/r)\n")
            for n, c in enumerate(rep.qexp):
                fh.write("%d\t%s\n" % (n, c))


def plot_convergence(rep, path):
    """Distance of each trapezoid level (and the extrapolated value) from the RHS."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ns = [n for n, _ in rep.mahler_levels]
    errs = [max(abs(v - rep.rhs), 1e-17) for _, v in rep.mahler_levels]
    ax.loglog(ns, errs, "o-", label="trapezoid level")
    ax.axhline(max(rep.diff, 1e-17), color="C1", ls="--", label="Richardson estimate")
    ax.axhline(rep.tolerance, color="C3", ls=":", label="tolerance")
    ax.set_xlabel("grid size n")
    ax.set_ylabel("|value - RHS|")
    ax.set_title("%s: torus quadrature" % rep.case)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def plot_qexp(rep, path):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    n = list(range(len(rep.qexp)))
    ax.stem(n, [float(c) for c in rep.qexp])
    ax.set_yscale("symlog", linthresh=1.0)
    ax.set_xlabel("n")
    ax.set_ylabel("coefficient")
    ax.set_title("%s: q-expansion of F(tau/r)" % rep.case, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def plot_summary(reports, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    names = [r.case for r in reports]
    diffs = [max(r.diff, 1e-17) for r in reports]
    colors = ["C2" if r.passed else "C3" for r in reports]
    ax.bar(names, diffs, color=colors)
    ax.set_yscale("log")
    if reports:
        ax.axhline(reports[0].tolerance, color="k", ls=":", label="tolerance")
        ax.legend(fontsize=8)
    ax.set_ylabel("|m(P) - RHS|")
    ax.set_title("verification summary")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def write_report(reports, aborted, outdir):
    """Per-case TSV and PNG files plus summary.tsv and summary.png; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for rep in reports:
        base = os.path.join(outdir, rep.case)
        write_case_tsv(rep, base + ".tsv")
        plot_convergence(rep, base + "_quadrature.png")
        paths += [base + ".tsv", base + "_quadrature.png"]
        if rep.qexp:
            plot_qexp(rep, base + "_qexp.png")
            paths.append(base + "_qexp.png")
    summ = os.path.join(outdir, "summary.tsv")
    with open(summ, "w") as fh:
        fh.write("case\tstatus\tlhs\trhs\tdiff\ttolerance\tsign\texpected\n")
        for r in reports:
            fh.write("%s\t%s\t%r\t%r\t%.3e\t%g\t%d\t%s\n" % (
                r.case, "pass" if r.passed else "fail", r.lhs, r.rhs, r.diff, r.tolerance, r.sign, r.expected))
        for name, err in aborted:
            fh.write("%s\taborted at %s\t\t\t\t\t\t%s\n" % (name, err.stage, err.message.replace("\t", " ")))
    paths.append(summ)
    if reports:
        plot_summary(reports, os.path.join(outdir, "summary.png"))
        paths.append(os.path.join(outdir, "summary.png"))
    return paths
