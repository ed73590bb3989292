"""Reference Kruskal-Wallis / Dunn / Holm values for the stats tests.

Independent of the C++ code: H and its p-value come from scipy.stats.kruskal,
Holm adjustment from statsmodels, Dunn z from the textbook tie-corrected
formula. Regenerate with:  python3 tests/oracles/make_stats_oracle.py > tests/stats_oracle_data.hpp
"""
import itertools
import math

import numpy as np
from scipy import stats
from statsmodels.stats.multitest import multipletests


def dunn(groups):
    pooled = np.concatenate(groups)
    ranks = stats.rankdata(pooled)
    n = len(pooled)
    _, counts = np.unique(pooled, return_counts=True)
    tie = float(np.sum(counts.astype(float) ** 3 - counts))
    var = n * (n + 1) / 12.0 - tie / (12.0 * (n - 1))
    mean_ranks, off = [], 0
    for g in groups:
        mean_ranks.append(ranks[off:off + len(g)].mean())
        off += len(g)
    zs, ps = [], []
    for a, b in itertools.combinations(range(len(groups)), 2):
        se = math.sqrt(var * (1.0 / len(groups[a]) + 1.0 / len(groups[b])))
        z = (mean_ranks[a] - mean_ranks[b]) / se
        zs.append(z)
        ps.append(2.0 * stats.norm.sf(abs(z)))
    adj = multipletests(ps, method="holm")[1]
    return zs, ps, list(adj)


def datasets():
    rng = np.random.default_rng(20240611)
    out = []
    for k in range(20):
        ngroups = 2 + k % 5
        groups = []
        for g in range(ngroups):
            size = int(rng.integers(3, 11))
            vals = rng.normal(loc=0.4 * g * (k % 3), scale=1.0, size=size)
            if k % 4 == 1:
                vals = np.round(vals, 0)  # heavy ties
            elif k % 4 == 3:
                vals = np.round(vals, 1)
            groups.append(vals)
        out.append(groups)
    return out


def fmt(v):
    return repr(float(v))


print("// Generated by tests/oracles/make_stats_oracle.py -- do not edit.")
print("#pragma once")
print("#include <vector>")
print("namespace oracle {")
print("struct StatsCase {")
print("    std::vector<std::vector<double>> groups;")
print("    double h;")
print("    double p;")
print("    std::vector<double> z;")
print("    std::vector<double> p_raw;")
print("    std::vector<double> p_holm;")
print("};")
print("inline const std::vector<StatsCase>& stats_cases() {")
print("    static const std::vector<StatsCase> cases = {")
for groups in datasets():
    h, p = stats.kruskal(*groups)
    zs, ps, adj = dunn(groups)
    gs = ", ".join("{" + ", ".join(fmt(v) for v in g) + "}" for g in groups)
    print("        {{" + gs + "},")
    print("         " + fmt(h) + ", " + fmt(p) + ",")
    print("         {" + ", ".join(fmt(v) for v in zs) + "},")
    print("         {" + ", ".join(fmt(v) for v in ps) + "},")
    print("         {" + ", ".join(fmt(v) for v in adj) + "}},")
print("    };")
print("    return cases;")
print("}")
print("}  // namespace oracle")
