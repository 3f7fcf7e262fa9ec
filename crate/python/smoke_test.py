"""Smoke test for the circlab Python module (build with maturin first)."""

import math

import circlab


def main():
    assert circlab.card_a2ps(4, 2, 0) == 44
    assert circlab.card_a2ps(4, 2, 1) == 10
    assert circlab.h_pk(2, 1) == (1, 2)
    assert circlab.count_tuples("a2ps", 4, 4, s=0) == 44

    assert circlab.limit_cov("rc", 1, 1, 1.0, 1.0) == 2.0
    assert circlab.limit_cov("rc", 1, 1, 1.0, 1.0, mode="paper-literal") == 0.0
    assert abs(circlab.exact_finite_n_cov("sc", 2, 2, 1.0, 1.0, 5) - 3.6) < 1e-12
    seq, limit = circlab.oracle_limit("sc", 2, 2, 1.0, 1.0)
    assert len(seq) == 4 and abs(limit - 4.0) < 0.04

    s = circlab.CirculantSample("rc", 9, [0.3 * i - 1.0 for i in range(9)])
    ev = s.eigenvalues()
    assert abs(sum(ev) - s.trace_power(1, "dense")) < 1e-12
    assert abs(ev[1] + ev[8]) < 1e-12
    assert len(s.dense()) == 9

    paths = circlab.sample_brownian_paths(3, [0.5, 1.0], 7)
    assert len(paths) == 3 and len(paths[0]) == 2

    rep = circlab.run_covariance_experiment("rc", [1], [1.0, 1.0], n=128, replicas=4000, seed=11)
    assert math.isfinite(rep.empirical) and rep.se > 0
    assert rep.theory_reconciled == 2.0
    print(rep)
    print("smoke test ok")


if __name__ == "__main__":
    main()
