"""Alternative-explanation search under mutex constraints.

Given a set of detected low-level features, the search covers them with a
consistent set of composites: choosing a composite activates it and its
detected children, and mutex propagation may suppress competing features.
Every maximal consistent cover is returned; features no composite can ever
cover come back as a distinguished novel-residue explanation, which is the
trigger for learning something new.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import ConceptGraph, NodeKind
from .grid import Grid
from .inhibition import ConflictError, SessionStack
from .learning import Learner, extract_features


@dataclass(frozen=True)
class Explanation:
    chosen: frozenset[int]
    covered: frozenset[int]
    suppressed: frozenset[int]
    residue: frozenset[int] = field(default_factory=frozenset)
    novel: bool = False


def _candidate_composites(graph: ConceptGraph, features: set[int]) -> list[int]:
    out = []
    for node_id in graph.node_ids():
        node = graph.nodes[node_id]
        if node.kind is not NodeKind.COMPOSITE:
            continue
        if any(child in features for child, _ in graph.children_of(node_id)):
            out.append(node_id)
    out.sort(key=lambda n: (-graph.nodes[n].scale, n))
    return out


def explain_features(
    graph: ConceptGraph,
    features: set[int],
    sessions: SessionStack | None = None,
) -> list[Explanation]:
    """All maximal consistent explanations of the given feature nodes."""
    if sessions is None:
        sessions = SessionStack(graph)
    if not features:
        return [Explanation(frozenset(), frozenset(), frozenset())]
    candidates = _candidate_composites(graph, features)
    explainable = {
        f
        for f in features
        if any(f in {c for c, _ in graph.children_of(n)} for n in candidates)
    }
    unexplainable = features - explainable
    entry_depth = sessions.depth
    found: dict[frozenset[int], Explanation] = {}

    def branch(idx: int, chosen: list[int], covered: set[int], activated: list[int]):
        extended = False
        for i in range(idx, len(candidates)):
            cand = candidates[i]
            feats = {c for c, _ in graph.children_of(cand)} & features
            if not feats or feats & covered:
                continue
            if sessions.is_inhibited(cand) or any(sessions.is_inhibited(f) for f in feats):
                continue
            sessions.begin_session()
            marked = []
            try:
                for n in [cand, *sorted(feats)]:
                    if not sessions.is_active(n):
                        sessions.set_active(n)
                        marked.append(n)
                sessions.propagate()
            except ConflictError:
                for n in marked:
                    sessions.clear_active(n)
                sessions.release_session()
                continue
            extended = True
            branch(i + 1, chosen + [cand], covered | feats, activated + marked)
            for n in marked:
                sessions.clear_active(n)
            sessions.release_session()
        if extended:
            return
        # terminal: account for every feature
        suppressed = set()
        ok = True
        for f in features - covered:
            if f in unexplainable:
                continue
            if sessions.is_inhibited(f) and any(
                p in covered for p in graph.mutex_partners(f)
            ):
                suppressed.add(f)
            else:
                ok = False
                break
        if ok and chosen:
            key = frozenset(chosen)
            found.setdefault(
                key,
                Explanation(
                    key,
                    frozenset(covered),
                    frozenset(suppressed),
                    frozenset(unexplainable),
                ),
            )

    branch(0, [], set(), [])
    while sessions.depth > entry_depth:
        sessions.release_session()

    explanations = list(found.values())
    maximal = [
        e
        for e in explanations
        if not any(e is not o and e.chosen < o.chosen for o in explanations)
    ]
    maximal.sort(key=lambda e: (-len(e.covered), sorted(e.chosen)))
    covered_anywhere = set().union(*(e.covered for e in maximal)) if maximal else set()
    suppressed_anywhere = (
        set().union(*(e.suppressed for e in maximal)) if maximal else set()
    )
    residue = features - covered_anywhere - suppressed_anywhere
    if residue:
        maximal.append(
            Explanation(
                frozenset(), frozenset(), frozenset(), frozenset(residue), novel=True
            )
        )
    return maximal


def explain(
    learner: Learner, g: Grid, sessions: SessionStack | None = None
) -> list[Explanation]:
    """Explain a grid: detect its features, then cover them with composites."""
    if g.is_empty():
        return [Explanation(frozenset(), frozenset(), frozenset())]
    detected = {n for n, _ in learner._detected_instances(g)}
    result = explain_features(learner.graph, detected, sessions)
    # features with no node at all are novelty the search cannot see
    if len(detected) < len(extract_features(g)) and not any(e.novel for e in result):
        result.append(
            Explanation(frozenset(), frozenset(), frozenset(), frozenset(), novel=True)
        )
    return result
