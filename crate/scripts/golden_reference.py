#!/usr/bin/env python3
"""Independent reference values for the bundled snapshot.

Recomputes the diagnostic tables of the `report` command with statsmodels,
scipy, arch and plain numpy, and prints them as JSON. The acceptance suite
pins these numbers.

    python3 scripts/golden_reference.py [--train-len 179] [--report out/report.json]

With `--report`, the script also evaluates statsmodels' exact ARIMA
log-likelihood at the parameters stored in the report's estimate block, and
runs a multi-start statsmodels search for comparison.
"""

import argparse
import json
import math
import pathlib
import warnings

import numpy as np
import pandas as pd
from arch.unitroot import PhillipsPerron
from scipy import stats
from statsmodels.tsa.arima.model import ARIMA
from statsmodels.tsa.stattools import adfuller, kpss

ROOT = pathlib.Path(__file__).resolve().parent.parent


def nw_bandwidth(n):
    return int(math.floor(4 * (n / 100) ** (2 / 9)))


def schwert(n):
    return int(math.floor(12 * (n / 100) ** 0.25))


def descriptive(x):
    n = len(x)
    skew = stats.skew(x, bias=True)
    kurt = stats.kurtosis(x, fisher=False, bias=True)
    jb = stats.jarque_bera(x)
    return {
        "n": n,
        "mean": float(np.mean(x)),
        "median": float(np.median(x)),
        "max": float(np.max(x)),
        "min": float(np.min(x)),
        "std_dev": float(np.std(x, ddof=1)),
        "skewness": float(skew),
        "kurtosis": float(kurt),
        "jb_stat": float(jb.statistic),
        "jb_prob": float(jb.pvalue),
    }


def longest(flags):
    best = cur = 0
    for f in flags:
        cur = cur + 1 if f else 0
        best = max(best, cur)
    return best


def frequency(x):
    d = np.diff(x)
    return {
        "zero": int(np.sum(x == 0)),
        "negative": int(np.sum(x < 0)),
        "positive": int(np.sum(x > 0)),
        "max_negative_run": longest(x < 0),
        "max_positive_run": longest(x > 0),
        "max_increasing": 1 + longest(d > 0),
        "max_decreasing": 1 + longest(d < 0),
    }


def runs_mean(x):
    t = np.mean(x)
    s = x[x != t] > t
    n1, n2 = int(s.sum()), int((~s).sum())
    n = n1 + n2
    r = 1 + int(np.sum(s[1:] != s[:-1]))
    e = 2 * n1 * n2 / n + 1
    v = 2 * n1 * n2 * (2 * n1 * n2 - n) / (n * n * (n - 1))
    z = (r - e) / math.sqrt(v)
    return {"runs": r, "expected": e, "std_dev": math.sqrt(v), "z": z,
            "p": float(2 * stats.norm.sf(abs(z)))}


def adf(x, regression):
    stat, p, lags, nobs, crit, _ = adfuller(
        x, maxlag=schwert(len(x)), regression=regression, autolag="AIC")
    return {"stat": float(stat), "p": float(p), "lags": int(lags), "crit5": float(crit["5%"])}


def pp(x, trend):
    t = PhillipsPerron(x, lags=nw_bandwidth(len(x)), trend=trend, test_type="tau")
    return {"stat": float(t.stat), "p": float(t.pvalue), "crit5": float(t.critical_values["5%"])}


def kpss_stat(x, regression):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        stat, _, _, crit = kpss(x, regression=regression, nlags=nw_bandwidth(len(x)))
    return {"stat": float(stat), "crit5": float(crit["5%"])}


def hac(scores, lags):
    n = scores.shape[0]
    omega = scores.T @ scores / n
    for j in range(1, min(lags, n - 1) + 1):
        g = scores[j:].T @ scores[:-j] / n
        omega += (1 - j / (lags + 1)) * (g + g.T)
    return omega


def bai_perron_0v1(x, trimming=0.15):
    """Wald statistic for one mean shift at the SSR-minimising split."""
    n = len(x)
    h = int(math.floor(trimming * n))
    best, split = np.inf, None
    for s in range(h, n - h + 1):
        ssr = np.sum((x[:s] - x[:s].mean()) ** 2) + np.sum((x[s:] - x[s:].mean()) ** 2)
        if ssr < best:
            best, split = ssr, s
    z = np.zeros((n, 2))
    z[:split, 0] = 1
    z[split:, 1] = 1
    beta = np.linalg.lstsq(z, x, rcond=None)[0]
    u = x - z @ beta
    omega = hac(z * u[:, None], nw_bandwidth(n))
    zz_inv = np.linalg.inv(z.T @ z)
    v = n * zz_inv @ omega @ zz_inv
    r = np.array([-1.0, 1.0])
    wald = float((r @ beta) ** 2 / (r @ v @ r))
    return {"f_stat": wald, "split": split, "reject": wald > 8.58}


def brown(x, step=0.001):
    best = None
    for i in range(int(round(1 / step)) + 1):
        a = i * step
        level, ssr = x[0], 0.0
        for v in x[1:]:
            ssr += (v - level) ** 2
            level = a * v + (1 - a) * level
        if best is None or ssr < best[1]:
            best = (a, ssr)
    a, ssr = best
    return {"alpha": a, "ssr": ssr, "rmse": math.sqrt(ssr / (len(x) - 1))}


def arima_check(train, report_path):
    est = json.loads(pathlib.Path(report_path).read_text())["estimate"]["value"]
    spec = est["spec"]
    order = (spec["p"], spec["d"], spec["q"])
    coef = {c["name"]: c["value"] for c in est["coefficients"]}
    ar = [coef[f"AR({i})"] for i in range(1, order[0] + 1)]
    ma = [coef[f"MA({i})"] for i in range(1, order[2] + 1)]
    model = ARIMA(train, order=order, trend="t" if spec["include_constant"] else "n")
    # With d = 1 the "t" trend is the drift, i.e. the mean of the differences.
    params = ([coef["C"]] if spec["include_constant"] else []) + ar + ma + [est["sigma2"]]
    ll_at_ours = float(model.loglike(np.array(params)))
    best = -np.inf
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        starts = [None] + [np.r_[([0.0] if spec["include_constant"] else []),
                                  np.full(order[0], a), np.full(order[2], m), np.var(np.diff(train))]
                           for a, m in [(0.5, 0.5), (-0.5, -0.5), (0.3, 0.9), (0.0, -0.9)]]
        for s in starts:
            try:
                r = model.fit(start_params=s)
                best = max(best, float(r.llf))
            except Exception:
                pass
    return {"order": order, "ours": est["log_likelihood"],
            "statsmodels_at_ours": ll_at_ours, "statsmodels_best_multistart": best}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--input", default=str(ROOT / "data" / "usdtry_2022.csv"))
    ap.add_argument("--train-len", type=int, default=179)
    ap.add_argument("--report")
    args = ap.parse_args()

    df = pd.read_csv(args.input, parse_dates=["date"]).sort_values("date")
    rate = df["rate"].to_numpy()
    ret = np.diff(rate) / rate[:-1] * 100
    train = ret[: args.train_len]
    d_train = np.diff(train)

    out = {
        "n_prices": len(rate),
        "n_returns": len(ret),
        "train_len": len(train),
        "table1": descriptive(train),
        "table2": frequency(train),
        "table3_mean": runs_mean(train),
        "table4": {
            "adf_none": adf(train, "n"),
            "adf_ct": adf(train, "ct"),
            "pp_none": pp(train, "n"),
            "pp_ct": pp(train, "ct"),
            "kpss_c": kpss_stat(train, "c"),
            "kpss_ct": kpss_stat(train, "ct"),
        },
        "table5": {"kpss_c": kpss_stat(d_train, "c"), "kpss_ct": kpss_stat(d_train, "ct")},
        "table6": bai_perron_0v1(train),
        "table10_brown": brown(train),
    }
    if args.report:
        out["arima"] = arima_check(train, args.report)
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
