import random

import pytest

from resloc.errors import ValidationError
from resloc.picard import (
    ExtElem,
    H1Model,
    abelian_model,
    catalog_h1_model,
    load_h1_model,
    pic_pushforward,
    product_curve_p1_model,
    wedge_invariants,
)

STANDARD_BETA = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]


def pfaffian(matrix):
    n = len(matrix)
    if n == 0:
        return 1
    if n % 2:
        return 0
    total = 0
    for j in range(1, n):
        keep = [r for r in range(n) if r not in (0, j)]
        sub = [[matrix[r][c] for c in keep] for r in keep]
        total += (-1) ** (j - 1) * matrix[0][j] * pfaffian(sub)
    return total


def random_antisymmetric(rng, size, span=5):
    m = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            v = rng.randrange(-span, span + 1)
            m[a][b] = v
            m[b][a] = -v
    return m


def random_t_one(rng, size, span=4):
    t = {}
    from itertools import combinations

    for idx in combinations(range(size), 4):
        v = rng.randrange(-span, span + 1)
        if v:
            t[idx] = v
    return t


def random_model(rng, b1):
    return H1Model(
        b1=b1,
        m_beta=random_antisymmetric(rng, b1),
        m_c1=random_antisymmetric(rng, b1),
        t_one=random_t_one(rng, b1),
    )


class TestExtElem:
    def test_generators_anticommute(self):
        e0 = ExtElem(3, {(0,): 1})
        e1 = ExtElem(3, {(1,): 1})
        assert e0.wedge(e1) == e1.wedge(e0).scale(-1)

    def test_square_of_odd_generator_vanishes(self):
        e0 = ExtElem(3, {(0,): 1})
        assert e0.wedge(e0).is_zero()

    def test_associativity_random(self):
        rng = random.Random(11)
        for _ in range(20):
            elems = []
            for _ in range(3):
                terms = {}
                for _ in range(4):
                    k = rng.randrange(0, 3)
                    idx = tuple(sorted(rng.sample(range(5), k)))
                    terms[idx] = terms.get(idx, 0) + rng.randrange(-3, 4)
                elems.append(ExtElem(5, terms))
            a, b, c = elems
            assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))

    def test_wedge_power_of_two_form_pfaffian(self):
        rng = random.Random(5)
        for b1 in (2, 4, 6):
            q = b1 // 2
            m = random_antisymmetric(rng, b1)
            omega = ExtElem(
                b1, {(a, b): m[a][b] for a in range(b1) for b in range(a + 1, b1)}
            )
            import math

            top = omega.wedge_power(q).top_coefficient()
            assert top == math.factorial(q) * pfaffian(m)

    def test_bad_indices_rejected(self):
        with pytest.raises(ValidationError):
            ExtElem(3, {(1, 1): 1})
        with pytest.raises(ValidationError):
            ExtElem(3, {(0, 5): 1})


class TestH1ModelValidation:
    def test_odd_b1_rejected(self):
        with pytest.raises(ValidationError):
            H1Model(b1=3, m_beta=[[0] * 3] * 3, m_c1=[[0] * 3] * 3, t_one={})

    def test_non_antisymmetric_rejected(self):
        with pytest.raises(ValidationError):
            H1Model(b1=2, m_beta=[[0, 1], [1, 0]], m_c1=[[0, 0], [0, 0]], t_one={})

    def test_bad_t_one_key(self):
        with pytest.raises(ValidationError):
            H1Model(
                b1=4,
                m_beta=[[0] * 4] * 4,
                m_c1=[[0] * 4] * 4,
                t_one={(0, 0, 1, 2): 1},
            )

    def test_json_round_trip(self, tmp_path):
        import json

        model = random_model(random.Random(2), 4)
        path = tmp_path / "model.json"
        path.write_text(json.dumps(model.to_json_dict()))
        assert load_h1_model(path) == model

    def test_schema_mismatch(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"b1": 2}')
        with pytest.raises(ValidationError):
            load_h1_model(path)


class TestWedgeInvariants:
    def test_elliptic_times_line(self):
        model = product_curve_p1_model(1, 5)
        w = wedge_invariants(model)
        assert w == {(1, 0, 0): 5, (0, 1, 0): 2}

    def test_genus_two_times_line(self):
        for beta2 in (1, 3):
            model = product_curve_p1_model(2, beta2)
            w = wedge_invariants(model)
            assert w[(0, 0, 1)] == 0
            import math

            for i in range(3):
                assert w[(i, 2 - i, 0)] == 2 ** (2 - i) * math.factorial(2) * beta2**i

    def test_abelian_standard(self):
        model = abelian_model(STANDARD_BETA)
        w = wedge_invariants(model)
        assert w[(0, 0, 1)] == 1
        assert w[(0, 2, 0)] == 0
        assert w[(1, 1, 0)] == 0
        # Lambda^2 [beta] = beta^2 = 2 Pf(M_beta)
        assert w[(2, 0, 0)] == 2 * pfaffian(STANDARD_BETA)

    def test_basis_change_invariance(self):
        rng = random.Random(17)
        for trial in range(12):
            b1 = rng.choice((2, 4, 6))
            model = random_model(rng, b1)
            p = unimodular(rng, b1)
            transformed = transform_model(model, p)
            assert wedge_invariants(transformed) == wedge_invariants(model)


def unimodular(rng, size):
    """Random integer matrix with determinant +1, from elementary row additions."""
    m = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for _ in range(3 * size):
        i, j = rng.sample(range(size), 2)
        c = rng.randrange(-2, 3)
        for col in range(size):
            m[i][col] += c * m[j][col]
    return m


def transform_model(model, p):
    b1 = model.b1

    def two_form(matrix):
        return [
            [
                sum(p[c][a] * p[d][b] * matrix[c][d] for c in range(b1) for d in range(b1))
                for b in range(b1)
            ]
            for a in range(b1)
        ]

    def t_value(idx):
        order = tuple(sorted(idx))
        if len(set(order)) != 4:
            return 0
        sign = 1
        lst = list(idx)
        for i in range(4):
            for j in range(i + 1, 4):
                if lst[i] > lst[j]:
                    sign = -sign
        return sign * model.t_one.get(order, 0)

    from itertools import combinations, product

    t_new = {}
    for idx in combinations(range(b1), 4):
        total = 0
        for src in product(range(b1), repeat=4):
            coeff = 1
            for s, a in zip(src, idx):
                coeff *= p[s][a]
            if coeff:
                total += coeff * t_value(src)
        if total:
            t_new[idx] = total
    return H1Model(
        b1=b1, m_beta=two_form(model.m_beta), m_c1=two_form(model.m_c1), t_one=t_new
    )


class TestPicPushforward:
    def test_catalog_coefficients(self):
        for model in (
            product_curve_p1_model(1, 5),
            product_curve_p1_model(2, 3),
            abelian_model(STANDARD_BETA),
        ):
            assert pic_pushforward(model, "beta", 2) == model.beta_form().scale(-2)
            assert pic_pushforward(model, "c1", 2) == model.c1_form().scale(-2)
            assert pic_pushforward(model, "1", 4) == model.one_form().scale(24)

    def test_random_models(self):
        rng = random.Random(23)
        for _ in range(5):
            model = random_model(rng, rng.choice((2, 4, 6)))
            assert pic_pushforward(model, "beta", 2) == model.beta_form().scale(-2)
            assert pic_pushforward(model, "c1", 2) == model.c1_form().scale(-2)
            assert pic_pushforward(model, "1", 4) == model.one_form().scale(24)

    def test_invalid_combination(self):
        model = product_curve_p1_model(1, 1)
        with pytest.raises(ValidationError):
            pic_pushforward(model, "beta", 4)
        with pytest.raises(ValidationError):
            pic_pushforward(model, "1", 2)
        with pytest.raises(ValidationError):
            pic_pushforward(model, "kappa", 2)


class TestCatalog:
    def test_product_structure(self):
        model = product_curve_p1_model(1, 5)
        assert model.b1 == 2
        assert model.m_beta[0][1] == 5
        assert model.m_beta[1][0] == -5
        assert model.m_c1[0][1] == 2
        assert model.t_one == {}

    def test_abelian_structure(self):
        model = abelian_model(STANDARD_BETA)
        assert model.t_one == {(0, 1, 2, 3): 1}
        assert all(all(x == 0 for x in row) for row in model.m_c1)

    def test_catalog_dispatch(self):
        assert catalog_h1_model("product_curve_P1", g=2, beta2=1) == product_curve_p1_model(2, 1)
        assert catalog_h1_model("abelian", m_beta=STANDARD_BETA) == abelian_model(STANDARD_BETA)
        with pytest.raises(ValidationError):
            catalog_h1_model("nope")

    def test_genus_zero_rejected(self):
        with pytest.raises(ValidationError):
            product_curve_p1_model(0, 1)
