"""Independent brute-force oracles used to cross-check the engine.

Everything here is deliberately naive: plain BFS/DFS, subset enumeration,
iterated elimination. None of it shares code with the implementation
under test.
"""

from __future__ import annotations

from collections import deque

from gridmind import Environment, Grid, State

DELTAS = {"N": (0, -1), "E": (1, 0), "S": (0, 1), "W": (-1, 0)}
DELTA_ORDER = [("N", (0, -1)), ("E", (1, 0)), ("S", (0, 1)), ("W", (-1, 0))]


# -- state-space oracles ---------------------------------------------------


def legal_successors(env: Environment, state: State) -> list[State]:
    out = []
    ax, ay = state.agent
    for _, (dx, dy) in DELTA_ORDER:
        nxt = (ax + dx, ay + dy)
        if not env.is_free(nxt):
            continue
        if state.box is not None and nxt == state.box:
            beyond = (nxt[0] + dx, nxt[1] + dy)
            if env.is_free(beyond):
                out.append(State(nxt, beyond))
        else:
            out.append(State(nxt, state.box))
    return out


def reachable_states(env: Environment) -> set[State]:
    start = State(env.start, env.box)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in legal_successors(env, cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def goal_reachable(env: Environment) -> bool:
    goal = State(env.goal, env.box_target)
    return goal in reachable_states(env)


def bfs_distance(env: Environment, forbidden: set | None = None) -> int | None:
    """Shortest number of moves from start to goal, None if unreachable."""
    start = State(env.start, env.box)
    goal = State(env.goal, env.box_target)
    forbidden = forbidden or set()
    if start.agent in forbidden or goal.agent in forbidden:
        return None
    seen = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            return seen[cur]
        for nxt in legal_successors(env, cur):
            if nxt.agent in forbidden or nxt in seen:
                continue
            seen[nxt] = seen[cur] + 1
            queue.append(nxt)
    return None


def all_simple_maze_paths(env: Environment) -> set[tuple]:
    """Every simple start-to-goal cell sequence (mazes only)."""
    assert env.box is None
    paths: set[tuple] = set()
    goal = env.goal

    def rec(path: list, on_path: set):
        cur = path[-1]
        if cur == goal:
            paths.add(tuple(path))
            return
        for _, (dx, dy) in DELTA_ORDER:
            nxt = (cur[0] + dx, cur[1] + dy)
            if env.is_free(nxt) and nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                rec(path, on_path)
                path.pop()
                on_path.remove(nxt)

    rec([env.start], {env.start})
    return paths


def count_simple_maze_paths(env: Environment, cap: int) -> int:
    """Number of simple start-to-goal paths, stopping early at `cap`."""
    assert env.box is None
    goal = env.goal
    count = 0

    def rec(cur, on_path):
        nonlocal count
        if count > cap:
            return
        if cur == goal:
            count += 1
            return
        for _, (dx, dy) in DELTA_ORDER:
            nxt = (cur[0] + dx, cur[1] + dy)
            if env.is_free(nxt) and nxt not in on_path:
                on_path.add(nxt)
                rec(nxt, on_path)
                on_path.remove(nxt)

    rec(env.start, {env.start})
    return count


def iterated_elimination(
    states: set, transitions: dict, targets: set
) -> set:
    """Repeatedly delete non-target states with no successor outside the
    deleted set (zero-transition states included)."""
    deleted: set = set()
    changed = True
    while changed:
        changed = False
        for s in list(states):
            if s in deleted or s in targets:
                continue
            succs = transitions.get(s, [])
            if all(t in deleted for t in succs):
                deleted.add(s)
                changed = True
    return deleted


def deadlock_oracle(env: Environment) -> set[State]:
    """States from which the goal state is unreachable, plus (for mazes)
    iterated dead-end cells; computed independently of the engine."""
    states = reachable_states(env)
    goal = State(env.goal, env.box_target)
    # backward reachability over reversed edges
    preds: dict[State, list[State]] = {s: [] for s in states}
    for s in states:
        for t in legal_successors(env, s):
            if t in states:
                preds[t].append(s)
    alive = set()
    if goal in states:
        alive.add(goal)
        queue = deque([goal])
        while queue:
            cur = queue.popleft()
            for p in preds[cur]:
                if p not in alive:
                    alive.add(p)
                    queue.append(p)
    dead = states - alive
    if env.box is None:
        open_cells = {
            (x, y)
            for x in range(env.width)
            for y in range(env.height)
            if env.is_free((x, y))
        }
        filled: set = set()
        changed = True
        while changed:
            changed = False
            for cell in list(open_cells - filled):
                if cell in (env.start, env.goal):
                    continue
                degree = sum(
                    1
                    for dx, dy in DELTAS.values()
                    if (cell[0] + dx, cell[1] + dy) in open_cells - filled
                )
                if degree <= 1:
                    filled.add(cell)
                    changed = True
        dead |= {s for s in states if s.agent in filled}
    return dead


# -- explanation oracle ----------------------------------------------------


def explanation_subsets_oracle(
    composites: dict[int, set[int]],
    features: set[int],
    mutex: set[tuple[int, int]],
) -> set[frozenset[int]]:
    """All maximal consistent covers by brute-force subset enumeration.

    A subset of composites is valid when: their feature sets are pairwise
    disjoint, each covers >= 1 feature, no mutex pair occurs among chosen
    composites or covered features, and every feature is covered,
    mutex-suppressed by a covered feature, or not coverable by any
    composite at all.
    """

    def partners(n: int) -> set[int]:
        out = set()
        for a, b in mutex:
            if a == n:
                out.add(b)
            if b == n:
                out.add(a)
        return out

    explainable = {f for f in features if any(f in fs for fs in composites.values())}
    ids = sorted(composites)
    valid: set[frozenset[int]] = set()
    for mask in range(1, 2 ** len(ids)):
        chosen = [ids[i] for i in range(len(ids)) if mask >> i & 1]
        feat_sets = [composites[c] & features for c in chosen]
        if any(not fs for fs in feat_sets):
            continue
        covered: set[int] = set()
        disjoint = True
        for fs in feat_sets:
            if fs & covered:
                disjoint = False
                break
            covered |= fs
        if not disjoint:
            continue
        everything = set(chosen) | covered
        if any(partners(n) & everything for n in everything):
            continue
        suppressed = {
            f for f in features - covered if partners(f) & covered
        }
        if explainable - covered - suppressed:
            continue
        valid.add(frozenset(chosen))
    return {s for s in valid if not any(s < o for o in valid)}


# -- misc ------------------------------------------------------------------


def random_grid(rng, max_dim=16, symbols="abcd", max_symbols=4) -> Grid:
    w = rng.randint(1, max_dim)
    h = rng.randint(1, max_dim)
    syms = symbols[: rng.randint(1, max_symbols)]
    cells = {}
    for y in range(h):
        for x in range(w):
            if rng.random() < 0.35:
                cells[(x, y)] = rng.choice(syms)
    if not cells:
        cells[(rng.randrange(w), rng.randrange(h))] = syms[0]
    return Grid(w, h, cells)


def random_maze_text(rng, width, height, wall_p) -> str:
    cells = [
        ["#" if rng.random() < wall_p else "." for _ in range(width)]
        for _ in range(height)
    ]
    free = [(x, y) for y in range(height) for x in range(width)]
    sx, sy = rng.choice(free)
    gx, gy = rng.choice([c for c in free if c != (sx, sy)])
    cells[sy][sx] = "S"
    cells[gy][gx] = "G"
    return "\n".join("".join(row) for row in cells)


def random_push_text(rng, width=5, height=5, wall_p=0.15) -> str | None:
    cells = [
        ["#" if rng.random() < wall_p else "." for _ in range(width)]
        for _ in range(height)
    ]
    free = [(x, y) for y in range(height) for x in range(width) if cells[y][x] == "."]
    if len(free) < 4:
        return None
    picks = rng.sample(free, 4)
    for (x, y), ch in zip(picks, "SGBT"):
        cells[y][x] = ch
    return "\n".join("".join(row) for row in cells)
