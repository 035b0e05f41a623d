import pytest

from canarrow.corpus import CORPUS_DIR
from canarrow.parsing import load_theory, parse_term

@pytest.fixture(scope="module")
def vending():
    return load_theory(CORPUS_DIR / "vending.maude")

@pytest.fixture(scope="module")
def idem():
    return load_theory(CORPUS_DIR / "idem-vending.maude")

@pytest.mark.parametrize(
    "term,normal",
    [
        ("< q q q q q c >", "< $ q c >"),
        ("< q q q q q q q q >", "< $ $ >"),
        ("< $ c >", "< $ c >"),
        ("< q q q q M:Marking >", "< $ M:Marking >"),
    ],
)
def test_normalize_vending(vending, term, normal):
    from canarrow.variants import is_irreducible, normalize

    result = normalize(vending, parse_term(vending, term))
    assert result == parse_term(vending, normal)
    assert is_irreducible(vending, result)

@pytest.mark.parametrize(
    "term,normal",
    [
        ("< $ $ a a >", "< $ a >"),
        ("< c c c q q q q >", "< $ c >"),
        ("< $ M:Marking $ >", "< $ M:Marking >"),
    ],
)
def test_normalize_idempotence(idem, term, normal):
    from canarrow.variants import normalize

    assert normalize(idem, parse_term(idem, term)) == parse_term(idem, normal)

def test_normalization_step_cap(vending):
    from canarrow.errors import NonTerminationError
    from canarrow.variants import Normalizer

    norm = Normalizer(vending, max_steps=2)
    with pytest.raises(NonTerminationError):
        norm.normalize(parse_term(vending, "< q q q q q q q q q q q q >"))

def test_normalize_substitution(vending):
    from canarrow.kernel import Substitution, Var
    from canarrow.variants import normalize_substitution

    x = Var("X", "Marking")
    sub = Substitution({x: parse_term(vending, "q q q q c", "Marking")})
    assert normalize_substitution(vending, sub).image(x) == parse_term(vending, "$ c", "Marking")

def test_variants_of_ground_normal_form(vending):
    from canarrow.variants import variants

    result = variants(vending, parse_term(vending, "< $ c >"))
    assert result.complete
    assert len(result) == 1
    assert result.variants[0].term == parse_term(vending, "< $ c >")
    assert not result.variants[0].substitution

def test_variants_with_one_quarter(vending):
    from canarrow.kernel import Var, make
    from canarrow.variants import variants

    term = parse_term(vending, "q M:Marking", "Marking")
    m = Var("M", "Marking")
    dollar, q = vending.signature.constant("$"), vending.signature.constant("q")
    union = vending.signature.symbol("__", 2, "Marking")
    result = variants(vending, term)
    assert result.complete
    assert len(result) == 2
    folded = [v for v in result if v.substitution]
    assert len(folded) == 1
    (v,) = folded
    (rest,) = v.term.vars
    assert v.term == make(union, [dollar, rest])
    assert v.substitution.image(m) == make(union, [q, q, q, rest])

def test_variants_contain_change(vending):
    from canarrow.kernel import Var, make
    from canarrow.variants import variants

    term = parse_term(vending, "q q q q M:Marking", "Marking")
    dollar = vending.signature.constant("$")
    union = vending.signature.symbol("__", 2, "Marking")
    found = False
    for v in variants(vending, term):
        image = v.substitution.image(Var("M", "Marking"))
        if isinstance(image, Var) and v.term == make(union, [dollar, image]):
            found = True
    assert found

def test_variant_unify_solves_modulo_equations(vending):
    from canarrow.kernel import apply
    from canarrow.variants import normalize, variant_unify

    t = parse_term(vending, "< M:Marking $ >")
    u = parse_term(vending, "< q q q q c >")
    result = variant_unify(vending, t, u)
    assert result.complete
    assert len(result) == 1
    for sigma in result:
        assert normalize(vending, apply(t, sigma)) == normalize(vending, apply(u, sigma))

# unifiers reported by Maude for < a c q M3:Money > =? < W3:Marking $ >
IDEM_UNIFIERS = [
    ("$", "q c a"),
    ("q q q Z:Money", "c a Z:Money"),
    ("$ Z:Money", "$ q c a Z:Money"),
    ("$ q q q", "c a"),
    ("q q q", "$ c a"),
]

def _idem_problem(idem):
    t = parse_term(idem, "< a c q M3:Money >")
    u = parse_term(idem, "< W3:Marking $ >")
    return t, u

def _idem_unifier(idem, images):
    from canarrow.kernel import Substitution, Var

    m3, w3 = Var("M3", "Money"), Var("W3", "Marking")
    m3_image, w3_image = (parse_term(idem, image, "Marking") for image in images)
    return Substitution({m3: m3_image, w3: w3_image})

def _subsumes(theory, sigma, theta, xs):
    from canarrow.variants import variant_subsumes

    return variant_subsumes(theory, sigma, theta, xs)

def _equivalent(theory, sigma, theta, xs):
    from canarrow.variants import variant_subsumes

    return variant_subsumes(theory, sigma, theta, xs) and variant_subsumes(theory, theta, sigma, xs)

def test_variant_unify_idempotence(idem):
    from canarrow.kernel import Var, apply, ordered_variables
    from canarrow.variants import normalize, variant_unify

    t, u = _idem_problem(idem)
    xs = ordered_variables(t, u)
    result = variant_unify(idem, t, u)
    assert result.complete
    # the first reported unifier is an instance of the second one, with Z:Money as q
    assert len(result) == 4
    expected = [_idem_unifier(idem, images) for images in IDEM_UNIFIERS]
    for sigma in result:
        assert normalize(idem, apply(t, sigma)) == normalize(idem, apply(u, sigma))
        assert not (sigma.range_vars & {Var("M3", "Money"), Var("W3", "Marking")})
        assert sum(_equivalent(idem, sigma, theta, xs) for theta in expected[1:]) == 1
    for theta in expected:
        assert any(_subsumes(idem, sigma, theta, xs) for sigma in result)

def test_reported_unifier_is_instance_modulo_equations(idem):
    from canarrow.kernel import ordered_variables
    from canarrow.unify import minimize
    from canarrow.variants import variant_subsumes

    xs = ordered_variables(*_idem_problem(idem))
    first, second = (_idem_unifier(idem, images) for images in IDEM_UNIFIERS[:2])
    assert variant_subsumes(idem, second, first, xs)
    assert not variant_subsumes(idem, first, second, xs)
    assert len(minimize(idem.signature, [first, second], xs)) == 2

def test_unfiltered_variant_unify_is_complete(idem):
    from canarrow.kernel import apply, ordered_variables
    from canarrow.variants import normalize, variant_unify

    t, u = _idem_problem(idem)
    xs = ordered_variables(t, u)
    result = variant_unify(idem, t, u, filter=False)
    filtered = variant_unify(idem, t, u)
    assert len(result) >= len(filtered)
    for sigma in result:
        assert normalize(idem, apply(t, sigma)) == normalize(idem, apply(u, sigma))
    for images in IDEM_UNIFIERS:
        theta = _idem_unifier(idem, images)
        assert any(_subsumes(idem, sigma, theta, xs) for sigma in result)


def test_asym_variant_unify_keeps_terms_irreducible(idem):
    from canarrow.kernel import apply, ordered_variables
    from canarrow.variants import asym_variant_unify, is_irreducible

    t, u = _idem_problem(idem)
    xs = ordered_variables(t, u)
    pi = parse_term(idem, "M3:Money $", "Marking")
    result = asym_variant_unify(idem, t, u, [pi])
    assert len(result) == 2
    expected = [_idem_unifier(idem, IDEM_UNIFIERS[i]) for i in (1, 4)]
    for sigma in result:
        assert is_irreducible(idem, apply(pi, sigma))
        assert any(_equivalent(idem, sigma, theta, xs) for theta in expected)

def test_asym_variant_unify_without_terms_is_variant_unify(idem):
    from canarrow.variants import asym_variant_unify, variant_unify

    t, u = _idem_problem(idem)
    assert list(asym_variant_unify(idem, t, u, [])) == list(variant_unify(idem, t, u))
