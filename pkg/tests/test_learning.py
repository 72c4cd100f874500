"""Learning: feature extraction, mirror property, recognition,
transformations, discrepancy and imagination."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridmind import (
    ConceptGraph,
    EmptyInputError,
    Grid,
    Learner,
    NoFitError,
    SessionStack,
    Transformation,
    apply_transformation,
    extract_features,
    find_transformation,
)
from gridmind.learning import InhibitedError
from oracles import random_grid

RING = "xxx\nx.x\nxxx\n"


def test_extract_ring_has_four_runs():
    feats = extract_features(Grid.from_text(RING))
    shapes = sorted((f.offsets, f.anchor) for f in feats)
    assert len(feats) == 4
    h_run = frozenset({(0, 0), (1, 0), (2, 0)})
    v_run = frozenset({(0, 0), (0, 1), (0, 2)})
    assert (h_run, (0, 0)) in shapes
    assert (h_run, (0, 2)) in shapes
    assert (v_run, (0, 0)) in shapes
    assert (v_run, (2, 0)) in shapes


def test_extract_solid_block_has_interior():
    feats = extract_features(Grid.from_text("xxx\nxxx\nxxx\n"))
    interiors = [f for f in feats if f.anchor == (1, 1)]
    assert len(interiors) == 1
    assert interiors[0].offsets == frozenset({(0, 0)})
    covered = set()
    for f in feats:
        covered |= {(f.anchor[0] + dx, f.anchor[1] + dy) for dx, dy in f.offsets}
    assert covered == {(x, y) for x in range(3) for y in range(3)}


def test_observe_single_cell():
    learner = Learner()
    report = learner.observe(Grid.from_text("x\n"))
    assert report.nodes_created == 1
    assert learner.reconstruct(report.root) == Grid.from_text("x\n")


def test_observe_empty_grid_rejected():
    with pytest.raises(EmptyInputError):
        Learner().observe(Grid(3, 3, {}))


def test_observe_idempotent():
    learner = Learner()
    g = Grid.from_text(RING)
    first = learner.observe(g)
    second = learner.observe(g)
    assert second.nodes_created == 0
    assert second.root == first.root


def test_mirror_property_ring():
    learner = Learner()
    g = Grid.from_text(RING)
    assert learner.reconstruct(learner.observe(g).root) == g.cropped()


def test_mirror_property_random_grids():
    rng = random.Random(3)
    learner = Learner()
    for _ in range(100):
        g = random_grid(rng)
        root = learner.observe(g).root
        assert learner.reconstruct(root) == g.cropped()


@st.composite
def grids(draw):
    w = draw(st.integers(1, 8))
    h = draw(st.integers(1, 8))
    cells = draw(
        st.dictionaries(
            st.tuples(st.integers(0, w - 1), st.integers(0, h - 1)),
            st.sampled_from("abc"),
            min_size=1,
        )
    )
    return Grid(w, h, cells)


@settings(max_examples=60, deadline=None)
@given(grids())
def test_mirror_property_hypothesis(g):
    learner = Learner()
    assert learner.reconstruct(learner.observe(g).root) == g.cropped()


def test_non_interference_across_observations():
    rng = random.Random(13)
    learner = Learner()
    history = []
    for _ in range(10):
        g = random_grid(rng, max_dim=8)
        history.append((learner.observe(g).root, g.cropped().to_text()))
        for root, text in history:
            assert learner.reconstruct(root).to_text() == text


def test_reconstruct_inhibited_root_rejected():
    learner = Learner()
    root = learner.observe(Grid.from_text(RING)).root
    s = SessionStack(learner.graph)
    s.begin_session()
    s.inhibit(root)
    with pytest.raises(InhibitedError):
        learner.reconstruct(root, s)


# -- recognition -----------------------------------------------------------

FOUR_BARS = "aaa.bbb\n.......\nccc.ddd\n"


def test_recognize_exact_pattern_scores_one():
    learner = Learner()
    g = Grid.from_text(RING)
    root = learner.observe(g).root
    matches = learner.recognize(g)
    assert matches[0].concept == root
    assert matches[0].score == 1
    assert matches[0].anchor == (0, 0)


def test_recognize_missing_feature_scores_three_quarters():
    learner = Learner()
    root = learner.observe(Grid.from_text(FOUR_BARS)).root
    partial = Grid.from_text("aaa.bbb\n.......\nccc....\n")
    match = next(m for m in learner.recognize(partial) if m.concept == root)
    assert match.score == Fraction(3, 4)


def test_recognize_unknown_pattern_returns_nothing():
    learner = Learner()
    learner.observe(Grid.from_text(RING))
    scribble = Grid.from_text("z.z\n.z.\n")
    assert learner.recognize(scribble) == []


def test_recognize_translated_pattern():
    learner = Learner()
    root = learner.observe(Grid.from_text(RING)).root
    shifted = Grid.from_text(".....\n.xxx.\n.x.x.\n.xxx.\n")
    match = next(m for m in learner.recognize(shifted) if m.concept == root)
    assert match.score == 1
    assert match.anchor == (1, 1)


def test_recognition_humility_random():
    # patterns over disjoint symbol sets share no features at all
    rng = random.Random(29)
    learner = Learner()
    for _ in range(10):
        learner.observe(random_grid(rng, max_dim=8, symbols="abcd"))
    for _ in range(50):
        novel = random_grid(rng, max_dim=8, symbols="wxyz")
        assert all(m.score < Fraction(1, 2) for m in learner.recognize(novel))


# -- transformations -------------------------------------------------------

L_SHAPE = "x..\nx..\nxxx\n"


def test_identity_transformation():
    g = Grid.from_text(L_SHAPE)
    assert find_transformation(g, g).kind == "identity"


def test_translate_learned_from_shift():
    before = Grid.from_text("xx..\n....\n")
    after = Grid.from_text(".xx.\n....\n")
    t = find_transformation(before, after)
    assert (t.kind, t.dx, t.dy) == ("translate", 1, 0)
    assert apply_transformation(t, before) == after


def test_rotation_round_trips():
    before = Grid.from_text("xxx\nxxx\n")
    after = apply_transformation(Transformation("rotate90", k=1), before)
    assert (after.width, after.height) == (2, 3)
    t = find_transformation(before, after)
    assert (t.kind, t.k) == ("rotate90", 1)
    back = apply_transformation(Transformation("rotate90", k=3), after)
    assert back == before


def test_translate_inverse_pair():
    g = Grid.from_text(".x.\n.x.\n")
    t = Transformation("translate", dx=1, dy=0)
    u = Transformation("translate", dx=-1, dy=0)
    assert apply_transformation(u, apply_transformation(t, g)) == g


def test_scale_doubles_single_cell():
    g = Grid.from_text("x\n")
    scaled = apply_transformation(Transformation("scale", k=2), g)
    assert scaled == Grid.from_text("xx\nxx\n")


def test_no_fit_raises():
    with pytest.raises(NoFitError):
        find_transformation(Grid.from_text("x.\n..\n"), Grid.from_text("xx\nxx\n"))


def test_transformation_consistency_random():
    rng = random.Random(37)
    kinds = [
        Transformation("identity"),
        Transformation("translate", dx=1, dy=0),
        Transformation("translate", dx=0, dy=1),
        Transformation("rotate90", k=1),
        Transformation("rotate90", k=2),
        Transformation("rotate90", k=3),
        Transformation("reflect_h"),
        Transformation("reflect_v"),
        Transformation("scale", k=2),
    ]
    for _ in range(50):
        g = random_grid(rng, max_dim=6, symbols="ab", max_symbols=2)
        for t in kinds:
            try:
                after = apply_transformation(t, g)
            except Exception:
                continue
            found = find_transformation(g, after)
            assert apply_transformation(found, g) == after


def test_learn_transformation_stores_concepts():
    learner = Learner()
    before = Grid.from_text("xx..\n....\n")
    after = Grid.from_text(".xx.\n....\n")
    node = learner.learn_transformation(before, after, "push-east")
    t = learner.transformation_of(node)
    assert (t.kind, t.dx, t.dy) == ("translate", 1, 0)
    action = learner.labeled_node("action:push-east")
    assert learner.graph.association_weight(node, action) == 1


def test_match_under_transformations_rotated_shape():
    learner = Learner()
    g = Grid.from_text(L_SHAPE)
    root = learner.observe(g).root
    rotated = apply_transformation(Transformation("rotate90", k=1), g)
    results = learner.match_under_transformations(rotated)
    hits = [
        (m.concept, t.kind, t.k)
        for m, t in results
        if m.concept == root and m.score == 1
    ]
    assert (root, "rotate90", 1) in hits


def test_match_under_transformations_unknown_pattern():
    learner = Learner()
    learner.observe(Grid.from_text(RING))
    assert learner.match_under_transformations(Grid.from_text("q\n")) == []


# -- discrepancy -----------------------------------------------------------


def test_discrepancy_equilibrium():
    learner = Learner()
    g = Grid.from_text(RING)
    root = learner.observe(g).root
    d = learner.compute_discrepancy(g, root)
    assert d.is_empty()


def test_discrepancy_goal_vs_empty_grid():
    learner = Learner()
    root = learner.observe(Grid.from_text(RING)).root
    d = learner.compute_discrepancy(Grid(3, 3, {}), root)
    assert d.surplus == frozenset()
    assert {(x, y) for x, y, _ in d.missing} == Grid.from_text(RING).occupied


def test_discrepancy_surplus_cell():
    learner = Learner()
    g = Grid.from_text(RING)
    root = learner.observe(g).root
    extra_cells = dict(g.cells)
    extra_cells[(4, 4)] = "x"
    extra = Grid(5, 5, extra_cells)
    d = learner.compute_discrepancy(extra, root)
    assert d.missing == frozenset()
    assert d.surplus == frozenset({(4, 4, "x")})


def test_discrepancy_zero_iff_full_recognition():
    rng = random.Random(43)
    learner = Learner()
    for _ in range(20):
        g = random_grid(rng, max_dim=6).cropped()
        root = learner.observe(g).root
        assert learner.compute_discrepancy(g, root).is_empty()
        if learner.graph.nodes[root].kind.value == "Composite":
            assert any(
                m.concept == root and m.score == 1 and m.anchor == g.anchor()
                for m in learner.recognize(g)
            )
        if len(g.cells) > 1:
            dropped = dict(g.cells)
            dropped.pop(sorted(dropped)[-1])
            damaged = Grid(g.width, g.height, dropped)
            assert not learner.compute_discrepancy(damaged, root).is_empty()


# -- imagination -----------------------------------------------------------


def test_imagine_no_links():
    learner = Learner()
    n = learner.graph.create_primitive("n")
    assert learner.imagine(n, 3) == []


def test_imagine_follows_heaviest_link():
    learner = Learner()
    g = learner.graph
    a, b, c = (g.create_primitive(x) for x in "abc")
    g.record_association([a, b])
    g.record_association([a, b])
    g.record_association([a, b])
    g.record_association([a, c])
    assert learner.imagine(a, 1) == [b]


def test_imagine_stops_without_revisit():
    learner = Learner()
    g = learner.graph
    a, b, c = (g.create_primitive(x) for x in "abc")
    g.record_association([a, b])
    g.record_association([b, c])
    assert learner.imagine(a, 5) == [b, c]
