#!/usr/bin/env python3
"""Computes reference statistics for the CSV fixtures.

Run from the repository root:

    python3 tests/reference/make_reference.py

The output, tests/fixtures/reference.json, is committed; the acceptance
suite compares the library against it without needing Python.
"""

import json
import pathlib
import warnings

import numpy as np
from scipy import stats
from statsmodels.tsa.stattools import adfuller, kpss
from statsmodels.tsa.vector_ar.var_model import VAR
from statsmodels.tsa.vector_ar.vecm import coint_johansen
from statsmodels.stats.diagnostic import acorr_ljungbox

FIXTURE_DIR = pathlib.Path(__file__).resolve().parents[1] / "fixtures"

FIXTURES = [
    "causal_240",
    "rw_pair_240",
    "coint_240",
    "var1_240",
    "wn_pair_240",
    "ar_pair_240",
    "mixed_240",
    "causal_120",
    "var2_240",
    "coint_150",
]


def pp_ztau(x, trend, bandwidth):
    """Phillips-Perron Z-tau with a Bartlett kernel.

    Standard construction: OLS of y_t on [y_{t-1}, deterministics], then
    the serial-correlation correction built from the Bartlett long-run
    variance of the residuals.
    """
    x = np.asarray(x, float)
    n = len(x)
    y = x[1:]
    ylag = x[:-1]
    cols = [ylag]
    if trend in ("c", "ct"):
        cols.append(np.ones(n - 1))
    if trend == "ct":
        cols.append(np.arange(1, n, dtype=float))
    rhs = np.column_stack(cols)
    beta, _, _, _ = np.linalg.lstsq(rhs, y, rcond=None)
    u = y - rhs @ beta
    nobs = len(u)
    k = rhs.shape[1]
    s2 = u @ u / (nobs - k)
    gamma0 = u @ u / nobs
    lam2 = u @ u
    for j in range(1, bandwidth + 1):
        w = 1.0 - j / (bandwidth + 1.0)
        lam2 += 2.0 * w * (u[j:] @ u[:-j])
    lam2 /= nobs
    xtx_inv = np.linalg.inv(rhs.T @ rhs)
    se_rho = np.sqrt(s2 * xtx_inv[0, 0])
    s = np.sqrt(s2)
    lam = np.sqrt(lam2)
    return float(
        np.sqrt(gamma0 / lam2) * (beta[0] - 1.0) / se_rho
        - (lam2 - gamma0) * nobs * se_rho / (2.0 * lam * s)
    )


def ty_wald(data, effect, cause, m, d_max, trend):
    """Single-equation Wald statistic on the first m cause lags in the
    effect equation of a VAR(m + d_max) in levels."""
    res = VAR(data).fit(m + d_max, trend=trend)
    k = data.shape[1]
    ntrend = {"n": 0, "c": 1, "ct": 2}[trend]
    z = res.endog_lagged
    zz_inv = np.linalg.inv(z.T @ z)
    resid = res.resid
    t_eff, ncols = z.shape
    s2 = resid[:, effect] @ resid[:, effect] / (t_eff - ncols)
    rows = [ntrend + (j - 1) * k + cause for j in range(1, m + 1)]
    gamma = res.params[rows, effect]
    v = s2 * zz_inv[np.ix_(rows, rows)]
    w = float(gamma @ np.linalg.solve(v, gamma))
    return {"wald": w, "p": float(stats.chi2.sf(w, m))}


def series_block(x):
    out = {}
    for reg in ("c", "ct"):
        stat, _, usedlag, nobs, _, _ = adfuller(
            x, maxlag=6, regression=reg, autolag="AIC"
        )
        out[f"adf_{reg}_aic"] = {"stat": float(stat), "lag": int(usedlag),
                                 "nobs": int(nobs)}
    stat, _, usedlag, nobs, _, _ = adfuller(
        x, maxlag=6, regression="c", autolag="BIC"
    )
    out["adf_c_bic"] = {"stat": float(stat), "lag": int(usedlag),
                        "nobs": int(nobs)}
    for reg in ("c", "ct"):
        out[f"pp_{reg}_bw4"] = {"stat": pp_ztau(x, reg, 4)}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for reg in ("c", "ct"):
            stat, _, _, _ = kpss(x, regression=reg, nlags=4)
            out[f"kpss_{reg}_l4"] = {"stat": float(stat)}
    lb = acorr_ljungbox(x, lags=[10], model_df=0)
    out["lb_h10"] = {
        "stat": float(lb["lb_stat"].iloc[0]),
        "p": float(lb["lb_pvalue"].iloc[0]),
    }
    return out


def var_block(data, m, trend):
    res = VAR(data).fit(m, trend=trend)
    return {
        "params": [[float(v) for v in row] for row in res.params],
        "aic": float(res.aic),
        "bic": float(res.bic),
        "fpe": float(res.fpe),
        "nobs": int(res.nobs),
    }


def johansen_block(data, det_order, k_ar_diff):
    res = coint_johansen(data, det_order, k_ar_diff)
    return {
        "eig": [float(v) for v in res.eig],
        "trace": [float(v) for v in res.lr1],
        "maxeig": [float(v) for v in res.lr2],
    }


def main():
    reference = {"fixtures": {}}
    for name in FIXTURES:
        path = FIXTURE_DIR / f"{name}.csv"
        rows = path.read_text().strip().splitlines()
        labels = rows[0].split(",")[1:]
        data = np.array(
            [[float(v) for v in line.split(",")[1:]] for line in rows[1:]]
        )
        block = {
            "columns": labels,
            "series": {
                labels[0]: series_block(data[:, 0]),
                labels[1]: series_block(data[:, 1]),
            },
            "pair": {
                "var_c_m2": var_block(data, 2, "c"),
                "var_ct_m2": var_block(data, 2, "ct"),
                "ty_c_m2_d1": {
                    "second_to_first": ty_wald(data, 0, 1, 2, 1, "c"),
                    "first_to_second": ty_wald(data, 1, 0, 2, 1, "c"),
                },
                "johansen_det0_k1": johansen_block(data, 0, 1),
                "johansen_det1_k1": johansen_block(data, 1, 1),
                "johansen_det1_k4": johansen_block(data, 1, 4),
            },
        }
        reference["fixtures"][name] = block
        print(f"{name}: done")

    out_path = FIXTURE_DIR / "reference.json"
    with open(out_path, "w") as f:
        json.dump(reference, f, indent=1)
        f.write("\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
