import itertools
import random

import pytest

from kleinform.errors import KleinformError, ValidationError
from kleinform.groups import cyclic, symmetric3
from kleinform.groupoid_lines import (
    FiniteGroupoidPresentation,
    GammaAction,
    GroupoidCocycle,
    cocycle_from_section,
    equivariant_assemble,
    group_action_groupoid,
    parse_groupoid_text,
    sections_dim_groupoid,
    shift_cocycle,
    sl2z_word_fragment,
    validate_groupoid_cocycle,
)
from kleinform.moduli import SL2Z
from kleinform.qz import QZ


def z2_point():
    """One object with a flip: the quotient of a point by Z/2."""
    mors = [(0, 0, "e"), (0, 0, "t")]
    comp = {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "e"}
    return FiniteGroupoidPresentation(1, mors, comp)


def pair_groupoid():
    mors = [(0, 0, "id0"), (1, 1, "id1"), (0, 1, "f"), (1, 0, "g")]
    comp = {
        ("id0", "id0"): "id0",
        ("id1", "id1"): "id1",
        ("f", "id0"): "f",
        ("id1", "f"): "f",
        ("g", "id1"): "g",
        ("id0", "g"): "g",
        ("g", "f"): "id0",
        ("f", "g"): "id1",
    }
    return FiniteGroupoidPresentation(2, mors, comp)


def test_point_groupoid():
    p = FiniteGroupoidPresentation(1, [(0, 0, "e")], {("e", "e"): "e"})
    assert p.identities == {0: "e"}
    assert p.compose("e", "e") == "e"
    assert p.components() == ((0,),)


def test_pair_groupoid_structure():
    p = pair_groupoid()
    assert p.source("f") == 0 and p.target("f") == 1
    assert p.compose("g", "f") == "id0"
    assert p.compose("f", "f") is None
    assert p.identities == {0: "id0", 1: "id1"}
    assert p.components() == ((0, 1),)


def test_components_with_isolated_object():
    mors = [(0, 0, "a"), (1, 1, "b"), (2, 2, "c")]
    comp = {("a", "a"): "a", ("b", "b"): "b", ("c", "c"): "c"}
    p = FiniteGroupoidPresentation(3, mors, comp)
    assert p.components() == ((0,), (1,), (2,))


def test_structure_validation_errors():
    with pytest.raises(ValidationError):
        FiniteGroupoidPresentation(1, [(0, 0)], {})
    with pytest.raises(ValidationError):
        FiniteGroupoidPresentation(1, [(0, 2, "f")], {})
    with pytest.raises(ValidationError):
        FiniteGroupoidPresentation(1, [(0, 0, "e"), (0, 0, "e")], {})
    with pytest.raises(ValidationError):
        FiniteGroupoidPresentation(
            1, [(0, 0, "e")], {("e", "e"): "e", ("e", "x"): "e"}
        )
    # (f, f) is not composable in the pair groupoid
    with pytest.raises(ValidationError):
        FiniteGroupoidPresentation(
            2,
            [(0, 0, "id0"), (1, 1, "id1"), (0, 1, "f"), (1, 0, "g")],
            {("f", "f"): "id0"},
        )
    # composable, but the claimed composite has the wrong endpoints
    with pytest.raises(ValidationError):
        FiniteGroupoidPresentation(
            2,
            [(0, 0, "id0"), (1, 1, "id1"), (0, 1, "f"), (1, 0, "g")],
            {("f", "g"): "f"},
        )


def test_missing_composition_total_mode():
    mors = [(0, 0, "e"), (0, 0, "t")]
    comp = {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t"}
    with pytest.raises(ValidationError) as exc:
        FiniteGroupoidPresentation(1, mors, comp)
    assert "missing composition" in str(exc.value)
    # the same table is accepted as a partial presentation
    p = FiniteGroupoidPresentation(1, mors, comp, partial=True)
    assert p.compose("t", "t") is None


def test_no_identity_error():
    mors = [(0, 0, "a"), (0, 0, "b")]
    comp = {
        ("a", "a"): "a",
        ("a", "b"): "a",
        ("b", "a"): "a",
        ("b", "b"): "a",
    }
    with pytest.raises(ValidationError) as exc:
        FiniteGroupoidPresentation(1, mors, comp)
    assert "identity" in str(exc.value)


def test_associativity_error_partial():
    labels = ["e", "a", "b", "c", "ab", "bc", "x", "y"]
    mors = [(0, 0, lab) for lab in labels]
    comp = {("e", lab): lab for lab in labels}
    comp.update({(lab, "e"): lab for lab in labels})
    comp[("e", "e")] = "e"
    comp.update({("a", "b"): "ab", ("ab", "c"): "x", ("b", "c"): "bc", ("a", "bc"): "y"})
    with pytest.raises(ValidationError) as exc:
        FiniteGroupoidPresentation(1, mors, comp, partial=True)
    assert "associativity" in str(exc.value)


def test_missing_inverse_error():
    mors = [(0, 0, "e"), (0, 0, "t")]
    comp = {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "t"}
    with pytest.raises(ValidationError) as exc:
        FiniteGroupoidPresentation(1, mors, comp)
    assert "inverse" in str(exc.value)


def test_cocycle_values_default_to_zero():
    p = z2_point()
    c = GroupoidCocycle(p, {"t": QZ(1, 2)})
    assert c("t") == QZ(1, 2)
    assert c("e") == QZ(0)
    with pytest.raises(ValidationError):
        GroupoidCocycle(p, {"nope": QZ(0)})


def test_validate_flip_cocycle():
    p = z2_point()
    good = GroupoidCocycle(p, {"t": QZ(1, 2)})
    report = validate_groupoid_cocycle(good)
    assert report.valid
    assert bool(report)

    bad = GroupoidCocycle(p, {"t": QZ(1, 3)})
    report = validate_groupoid_cocycle(bad)
    assert not report.valid
    assert any("additivity" in v for v in report.violations)

    worse = GroupoidCocycle(p, {"e": QZ(1, 2)})
    report = validate_groupoid_cocycle(worse)
    assert any("identity" in v for v in report.violations)

    zero = GroupoidCocycle(p, {})
    assert validate_groupoid_cocycle(zero).valid


def test_sections_dim_examples():
    p = z2_point()
    assert sections_dim_groupoid(GroupoidCocycle(p, {"t": QZ(1, 2)})) == 0
    assert sections_dim_groupoid(GroupoidCocycle(p, {})) == 1


def test_sections_dim_disjoint_union():
    mors = [(0, 0, "e0"), (0, 0, "t0"), (1, 1, "e1"), (1, 1, "t1")]
    comp = {}
    for i in ("0", "1"):
        e, t = "e" + i, "t" + i
        comp.update({(e, e): e, (e, t): t, (t, e): t, (t, t): e})
    p = FiniteGroupoidPresentation(2, mors, comp)
    c = GroupoidCocycle(p, {"t0": QZ(1, 2)})
    assert sections_dim_groupoid(c) == 1


def test_sections_dim_rejects_invalid():
    p = z2_point()
    with pytest.raises(KleinformError):
        sections_dim_groupoid(GroupoidCocycle(p, {"t": QZ(1, 3)}))


def test_shift_cocycle_preserves_everything():
    p = pair_groupoid()
    c = GroupoidCocycle(p, {"f": QZ(1, 3), "g": QZ(2, 3)})
    assert validate_groupoid_cocycle(c).valid
    shifted = shift_cocycle(c, {0: QZ(1, 5), 1: QZ(3, 5)})
    assert validate_groupoid_cocycle(shifted).valid
    assert sections_dim_groupoid(shifted) == sections_dim_groupoid(c)
    assert shifted("f") == QZ(1, 3) + QZ(1, 5) - QZ(3, 5)
    # loop values never move under a shift
    assert shifted("id0") == QZ(0)


def test_cocycle_from_section():
    p = pair_groupoid()
    zero = cocycle_from_section(p, {0: QZ(0), 1: QZ(0)}, {})
    assert all(zero(lab) == QZ(0) for _, _, lab in p.morphisms)

    tau = {0: QZ(1, 4), 1: QZ(0)}
    transport = {"f": QZ(1, 2), "g": QZ(1, 2)}
    c = cocycle_from_section(p, tau, transport)
    assert validate_groupoid_cocycle(c).valid
    assert c("f") == QZ(1, 2) + QZ(1, 4)
    # un-shifting by tau recovers the transport values
    back = shift_cocycle(c, {0: -QZ(1, 4), 1: QZ(0)})
    assert back("f") == QZ(1, 2)
    assert back("g") == QZ(1, 2)


def test_cocycle_from_section_rejects_nonfunctorial():
    p = pair_groupoid()
    with pytest.raises(ValidationError) as exc:
        cocycle_from_section(p, {0: QZ(0), 1: QZ(0)}, {"f": QZ(1, 3)})
    assert "functorial" in str(exc.value)


def test_random_presentations_round_trip():
    rnd = random.Random(19)
    for _ in range(25):
        blocks = rnd.randrange(1, 4)
        p, _ = _random_disjoint_pairs(rnd, blocks)
        tau = {x: QZ(rnd.randrange(0, 8), 8) for x in range(p.n_objects)}
        transport = _random_functorial_transport(rnd, p)
        c = cocycle_from_section(p, tau, transport)
        assert validate_groupoid_cocycle(c).valid
        back = shift_cocycle(c, {x: -tau[x] for x in tau})
        for _, _, lab in p.morphisms:
            assert back(lab) == transport.get(lab, QZ(0))


def _random_disjoint_pairs(rnd, blocks):
    # disjoint union of pair groupoids and single points
    mors = []
    comp = {}
    obj = 0
    for b in range(blocks):
        size = rnd.choice((1, 2))
        if size == 1:
            e = "e%d" % obj
            mors.append((obj, obj, e))
            comp[(e, e)] = e
            obj += 1
        else:
            i, j = obj, obj + 1
            names = {
                "id%d" % i: (i, i),
                "id%d" % j: (j, j),
                "f%d" % i: (i, j),
                "g%d" % i: (j, i),
            }
            for lab, (s, d) in names.items():
                mors.append((s, d, lab))
            idi, idj = "id%d" % i, "id%d" % j
            f, g = "f%d" % i, "g%d" % i
            comp.update({
                (idi, idi): idi,
                (idj, idj): idj,
                (f, idi): f,
                (idj, f): f,
                (g, idj): g,
                (idi, g): g,
                (g, f): idi,
                (f, g): idj,
            })
            obj += 2
    return FiniteGroupoidPresentation(obj, mors, comp), obj


def _random_functorial_transport(rnd, p):
    # additive over composites: pick a potential per object and take differences
    pot = {x: QZ(rnd.randrange(0, 6), 6) for x in range(p.n_objects)}
    out = {}
    for s, d, lab in p.morphisms:
        out[lab] = pot[s] - pot[d]
    return out


def test_action_groupoid_of_conjugation():
    s3 = symmetric3()
    p = group_action_groupoid(s3, list(range(6)), lambda i, g: s3.conj(g, i))
    assert p.n_objects == 6
    assert len(p.morphisms) == 36
    assert set(p.components()) == {(0,), (1, 2, 5), (3, 4)}
    # morphism (g, i) runs from i to the conjugate of i
    assert p.source((1, 3)) == 3 and p.target((1, 3)) == 4
    assert p.compose((1, s3.conj(1, 3)), (1, 3)) == (s3.mul(1, 1), 3)


def test_gamma_action_identity_check():
    with pytest.raises(ValidationError):
        GammaAction((1, 2), 0, None, None, None)


def _cyclic_fragment(n):
    elements = tuple(range(n))

    def compose(a, b):
        return (a + b) % n

    return elements, compose


def test_assemble_character_on_point():
    p = FiniteGroupoidPresentation(1, [(0, 0, "e")], {("e", "e"): "e"})
    zero = GroupoidCocycle(p, {})
    elements, compose = _cyclic_fragment(3)
    action = GammaAction(
        elements, 0, compose,
        act_object=lambda x, g: x,
        act_morphism=lambda f, g: f,
    )
    out = equivariant_assemble(zero, lambda x, g: QZ(g, 3), action)
    assert out(("e", 0)) == QZ(0)
    assert out(("e", 1)) == QZ(1, 3)
    assert out(("e", 2)) == QZ(2, 3)
    assert validate_groupoid_cocycle(out).valid
    assert sections_dim_groupoid(out) == 0


def test_assemble_trivial_gamma_keeps_cocycle():
    p = z2_point()
    c = GroupoidCocycle(p, {"t": QZ(1, 2)})
    action = GammaAction(
        ("1",), "1", lambda a, b: "1",
        act_object=lambda x, g: x,
        act_morphism=lambda f, g: f,
    )
    out = equivariant_assemble(c, lambda x, g: QZ(0), action)
    assert out(("t", "1")) == QZ(1, 2)
    assert out(("e", "1")) == QZ(0)
    assert sections_dim_groupoid(out) == 0


def test_assemble_rejects_non_cocycle():
    p = FiniteGroupoidPresentation(1, [(0, 0, "e")], {("e", "e"): "e"})
    zero = GroupoidCocycle(p, {})
    elements, compose = _cyclic_fragment(2)
    action = GammaAction(
        elements, 0, compose,
        act_object=lambda x, g: x,
        act_morphism=lambda f, g: f,
    )
    # 1/3 is not a character of Z/2, so the assembled map cannot close up
    with pytest.raises(KleinformError) as exc:
        equivariant_assemble(
            zero, lambda x, g: QZ(1, 3) if g else QZ(0), action
        )
    assert "cocycle law" in str(exc.value)


def test_assemble_rejects_broken_action():
    p = z2_point()
    c = GroupoidCocycle(p, {})
    bad_obj = GammaAction(
        (0, 1), 0, lambda a, b: (a + b) % 2,
        act_object=lambda x, g: x + g,
        act_morphism=lambda f, g: f,
    )
    with pytest.raises(ValidationError):
        equivariant_assemble(c, lambda x, g: QZ(0), bad_obj)
    bad_mor = GammaAction(
        (0, 1), 0, lambda a, b: (a + b) % 2,
        act_object=lambda x, g: x,
        act_morphism=lambda f, g: "missing" if g else f,
    )
    with pytest.raises(ValidationError):
        equivariant_assemble(c, lambda x, g: QZ(0), bad_mor)


def test_parse_groupoid_text():
    text = """
# a single flip
objects 1
mor 0 0 e
mor 0 0 t
comp e e e
comp e t t
comp t e t
comp t t e
val t 1/2
"""
    p, vals = parse_groupoid_text(text)
    assert p.n_objects == 1
    assert vals == {"t": QZ(1, 2)}
    c = GroupoidCocycle(p, vals)
    assert validate_groupoid_cocycle(c).valid


def test_parse_groupoid_text_errors():
    with pytest.raises(KleinformError):
        parse_groupoid_text("mor 0 0 e\n")
    with pytest.raises(KleinformError):
        parse_groupoid_text("objects 1\nobjects 2\n")
    with pytest.raises(KleinformError):
        parse_groupoid_text("objects x\n")
    with pytest.raises(KleinformError):
        parse_groupoid_text("objects 1\nmor 0 0\n")
    with pytest.raises(KleinformError):
        parse_groupoid_text("objects 1\nmor 0 0 e\ncomp e e\n")
    with pytest.raises(KleinformError):
        parse_groupoid_text("objects 1\nmor 0 0 e\ncomp e e e\nval e\n")
    with pytest.raises(KleinformError):
        parse_groupoid_text("objects 1\nwat 1 2\n")


def test_sl2z_word_fragment_counts():
    s, t = SL2Z.S(), SL2Z.T()
    for bound in (0, 1, 2, 3):
        elements, compose = sl2z_word_fragment([s, t], max_length=bound)
        # brute-force oracle: entry sets of all words of length <= bound
        seen = {SL2Z.identity().entries()}
        for k in range(1, bound + 1):
            for word in itertools.product((s, t), repeat=k):
                m = SL2Z.identity()
                for letter in word:
                    m = m @ letter
                seen.add(m.entries())
        assert {m.entries() for m in elements} == seen
        assert elements[0] == SL2Z.identity()


def test_sl2z_word_fragment_compose():
    s, t = SL2Z.S(), SL2Z.T()
    elements, compose = sl2z_word_fragment([s, t], max_length=2)
    st = compose(s, t)
    assert st is not None
    assert st.entries() == (s @ t).entries()
    # the product of two boundary words usually escapes the fragment
    long_members = [m for m in elements if m not in (SL2Z.identity(),)]
    escaped = [1 for a in long_members for b in long_members
               if compose(a, b) is None]
    assert escaped
    with pytest.raises(KleinformError):
        sl2z_word_fragment([s], max_length=-1)
