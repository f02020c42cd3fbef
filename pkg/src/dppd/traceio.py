"""CSV serialization of run traces.

Schema (version 1): a comment line ``# schema=1`` followed by the header
``k,alpha,xbar_0..xbar_{n-1},cons_x,cons_mu,lagrangian,run_eval_err,
constr_viol``.  Floats are written with 17 significant digits so that a
write/read round trip reproduces every value exactly.  The comparator's
metric column is named ``ergodic_eval_err`` instead of ``run_eval_err``.
"""

import numpy as np

__all__ = ["write_trace", "read_trace", "report_compare"]

SCHEMA = 1


def _fmt(v):
    return f"{v:.17g}"


def write_trace(trace, path, err_name="run_eval_err"):
    n = trace.xbar.shape[1]
    err = getattr(trace, err_name)
    header = (
        ["k", "alpha"]
        + [f"xbar_{j}" for j in range(n)]
        + ["cons_x", "cons_mu", "lagrangian", err_name, "constr_viol"]
    )
    with open(path, "w") as fh:
        fh.write(f"# schema={SCHEMA}\n")
        fh.write(",".join(header) + "\n")
        for r in range(trace.k.size):
            row = (
                [str(int(trace.k[r])), _fmt(trace.alpha[r])]
                + [_fmt(v) for v in trace.xbar[r]]
                + [
                    _fmt(trace.cons_x[r]),
                    _fmt(trace.cons_mu[r]),
                    _fmt(trace.lagrangian[r]),
                    _fmt(err[r]),
                    _fmt(trace.constr_viol[r]),
                ]
            )
            fh.write(",".join(row) + "\n")


def read_trace(path):
    """Columns of a trace CSV as a dict of arrays (keyed by header name)."""
    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith("# schema="):
            raise ValueError("missing schema comment line")
        if int(first.split("=", 1)[1]) != SCHEMA:
            raise ValueError(f"unsupported trace schema: {first}")
        names = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = np.empty((0, len(names)))
    out = {name: data[:, j] for j, name in enumerate(names)}
    out["k"] = out["k"].astype(int)
    return out


def _error_series(cols):
    for name in ("run_eval_err", "ergodic_eval_err"):
        if name in cols:
            return cols["k"], cols[name]
    raise ValueError("trace has no error column")


def report_compare(trace_a, trace_b, f_star=None, ks=(100, 1000, 10000)):
    """Rows (k, err_a, err_b, ratio) at the requested round indices.

    Traces are column dicts from read_trace.  Stored error columns are used
    when finite; with f_star given, traces recorded without an optimum fall
    back to the cumulative mean of the recorded Lagrangian column (exact for
    stride 1).  Requested rounds not covered by both traces raise.
    """

    def err_at(cols, k):
        kk, errs = _error_series(cols)
        if kk.size == 0 or k > kk.max() or k < kk.min():
            raise ValueError(f"trace does not cover round {k}")
        idx = int(np.argmin(np.abs(kk - k)))
        e = errs[idx]
        if np.isnan(e):
            if f_star is None:
                raise ValueError("trace has no stored error and no f_star given")
            lag = cols["lagrangian"][: idx + 1]
            e = abs(lag.mean() - f_star)
        return float(e)

    rows = []
    for k in ks:
        ea = err_at(trace_a, k)
        eb = err_at(trace_b, k)
        rows.append((k, ea, eb, ea / eb if eb != 0 else np.inf))
    return rows
