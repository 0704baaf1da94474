import numpy as np
import pytest

from helpers import (blocks_cross_ratios, config_blocks, normalize_blocks,
                     random_invertible)
from reflrigid import (Config6Normal, TriangleParams, build_rep,
                       config_cross_ratios, config_equivalent,
                       extract_and_normalize, solve_scalar_config)
from reflrigid.configurations import dumps_configs, loads_configs
from reflrigid.errors import (DegenerateCoefficients, DimensionMismatch,
                              NonRealRoots, NotLagrangian, NotTransverse,
                              Singular)
from reflrigid.triangle import quadratic_coefficients

LAM_237 = tuple(TriangleParams.of((2, 3, 7)).lambdas)


def conjugated(c, rng):
    """The same configuration moved by a random global g and with random
    bases inside each subspace, re-normalized by hand."""
    n = c.n
    g = random_invertible(rng, 2 * n)
    blocks = [g @ b @ random_invertible(rng, n) for b in config_blocks(c)]
    return Config6Normal(n, *normalize_blocks(blocks))


def test_enumeration_counts():
    assert len(solve_scalar_config(*LAM_237, 1)) == 2
    assert len(solve_scalar_config(*LAM_237, 2)) == 3
    with pytest.raises(NonRealRoots):
        solve_scalar_config(0.9, 0.9, 0.9, 1)
    with pytest.raises(DegenerateCoefficients):
        solve_scalar_config(0.5, 1.0, 0.3, 1)
    with pytest.raises(DegenerateCoefficients):
        solve_scalar_config(0.0, 0.3, 0.3, 1)


def test_enumerated_configs_satisfy_equations():
    a, b, c0 = quadratic_coefficients(*LAM_237)
    for c in solve_scalar_config(*LAM_237, 3):
        A1 = np.linalg.solve(c.N, c.M1)
        assert np.linalg.norm(a * A1 @ A1 + b * A1 + c0 * np.eye(3)) < 1e-10
        for C, lam in zip(config_cross_ratios(c), LAM_237):
            np.testing.assert_allclose(C.endo, lam * np.eye(3), atol=1e-9)
        # formulas agree with the projection definition
        for C, D in zip(config_cross_ratios(c),
                        blocks_cross_ratios(config_blocks(c))):
            np.testing.assert_allclose(C.endo, D, atol=1e-9)


def test_n1_cross_ratios_are_the_targets():
    for c in solve_scalar_config(*LAM_237, 1):
        vals = [C.endo[0, 0] for C in config_cross_ratios(c)]
        np.testing.assert_allclose(vals, LAM_237, atol=1e-12)


def test_symmetric_variant():
    for sig in ((2, 0), (1, 1)):
        configs = solve_scalar_config(*LAM_237, 2, symmetric=True,
                                      signature=sig)
        assert len(configs) == 3
        for c in configs:
            assert c.symmetric
            assert np.allclose(c.M1, c.M1.T)
            for C, lam in zip(config_cross_ratios(c), LAM_237):
                np.testing.assert_allclose(C.endo, lam * np.eye(2),
                                           atol=1e-9)
    with pytest.raises(ValueError):
        solve_scalar_config(*LAM_237, 2, signature=(1, 1))
    with pytest.raises(NotLagrangian):
        Config6Normal(2, np.eye(2), np.array([[1.0, 2.0], [0.0, 1.0]]),
                      np.eye(2), np.eye(2), symmetric=True)


def test_config_cross_ratio_examples(rng):
    c = Config6Normal(2, np.eye(2), 2 * np.eye(2), 2 * np.eye(2),
                      3 * np.eye(2))
    np.testing.assert_allclose(config_cross_ratios(c)[2].endo, np.eye(2))
    bad = Config6Normal(1, [[1.0]], [[0.0]], [[2.0]], [[3.0]])
    with pytest.raises(Singular):
        config_cross_ratios(bad)
    rnd = Config6Normal(3, *(rng.standard_normal((3, 3)) for _ in range(4)))
    for C, D in zip(config_cross_ratios(rnd),
                    blocks_cross_ratios(config_blocks(rnd))):
        np.testing.assert_allclose(C.endo, D,
                                   atol=1e-9 * max(1, np.abs(D).max()))


def test_extract_geometric():
    c = extract_and_normalize(build_rep("diagonal", (2, 3, 7), 1))
    assert c.M2[0, 0] / c.M1[0, 0] == pytest.approx(LAM_237[2], abs=1e-12)
    c2 = extract_and_normalize(build_rep("diagonal", (2, 3, 7), 2))
    for m in c2.matrices:
        assert np.linalg.norm(m - m[0, 0] * np.eye(2)) < 1e-12
    assert c2.lambdas == pytest.approx(LAM_237)


def test_extract_reproduces_cross_ratios():
    for kind in ("diagonal", "symplectic"):
        rep = build_rep(kind, (3, 4, 5), 2)
        c = extract_and_normalize(rep)
        assert c.symmetric == (kind == "symplectic")
        for C, D in zip(config_cross_ratios(c), rep.cross_ratios()):
            assert C.same_class(D, atol=1e-8)


def test_extract_rejects_non_transverse():
    # U2+ and U3+ of this symmetric-power rep share a line
    with pytest.raises(NotTransverse):
        extract_and_normalize(build_rep("sympower", (3, 4, 5), 2))


def test_extract_is_idempotent():
    c = solve_scalar_config(*LAM_237, 2)[1]
    again = extract_and_normalize(c.subspaces())
    for a, b in zip(c.matrices, again.matrices):
        np.testing.assert_allclose(a, b, atol=1e-12)


def test_equivalence(rng):
    configs = solve_scalar_config(*LAM_237, 2)
    for c in configs:
        assert config_equivalent(c, conjugated(c, rng))
    assert not config_equivalent(configs[0], configs[-1])
    diag = extract_and_normalize(build_rep("diagonal", (2, 3, 7), 2))
    matches = [i for i, c in enumerate(configs) if config_equivalent(diag, c)]
    assert matches in ([0], [2])
    with pytest.raises(DimensionMismatch):
        config_equivalent(configs[0], solve_scalar_config(*LAM_237, 1)[0])


def test_json_round_trip():
    configs = solve_scalar_config(*LAM_237, 2, symmetric=True,
                                  signature=(1, 1))
    back = loads_configs(dumps_configs(configs))
    assert len(back) == 3
    for a, b in zip(configs, back):
        assert a.symmetric == b.symmetric and a.lambdas == b.lambdas
        for x, y in zip(a.matrices, b.matrices):
            np.testing.assert_array_equal(x, y)
    single = loads_configs(dumps_configs(configs[:1])[1:-1])
    assert len(single) == 1
