"""Grounded problem solving on corridor mazes and single-box push puzzles.

The solver works over a materialized state graph. Before searching it
inhibits deadlock states (states from which no goal state is reachable,
plus iterated cul-de-sac cells in mazes). The search itself runs two
frontiers of growing simple-path branches, forward from the start and
backward from the goal, alternating one expansion round each; a solution
is the join of a forward and a backward branch whose heads meet. Solutions
are registered as high-level concepts so that inhibiting a solution
concept forces the next run to discover an alternative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .graph import ConceptGraph, NodeKind
from .grid import Grid
from .inhibition import SessionStack, StateGraphView

DIRECTIONS = (("N", (0, -1)), ("E", (1, 0)), ("S", (0, 1)), ("W", (-1, 0)))

WALL = "#"
FREE_CHARS = {".", " "}


class InvalidEnvError(Exception):
    pass


class State(NamedTuple):
    agent: tuple[int, int]
    box: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class Environment:
    width: int
    height: int
    walls: frozenset[tuple[int, int]]
    start: tuple[int, int]
    goal: tuple[int, int]
    box: Optional[tuple[int, int]] = None
    box_target: Optional[tuple[int, int]] = None

    @property
    def kind(self) -> str:
        return "PushPuzzle" if self.box is not None else "Maze"

    def is_free(self, pos: tuple[int, int]) -> bool:
        x, y = pos
        return 0 <= x < self.width and 0 <= y < self.height and pos not in self.walls

    @property
    def start_state(self) -> State:
        return State(self.start, self.box)

    @property
    def goal_state(self) -> State:
        return State(self.goal, self.box_target)

    @classmethod
    def from_text(cls, text: str) -> "Environment":
        lines = [ln for ln in text.splitlines()]
        while lines and not lines[-1].strip():
            lines.pop()
        if not lines:
            raise InvalidEnvError("empty environment")
        width = max(len(ln) for ln in lines)
        walls = set()
        marks: dict[str, list[tuple[int, int]]] = {"S": [], "G": [], "B": [], "T": []}
        for y, line in enumerate(lines):
            padded = line.ljust(width, WALL)
            for x, ch in enumerate(padded):
                if ch == WALL:
                    walls.add((x, y))
                elif ch in marks:
                    marks[ch].append((x, y))
                elif ch not in FREE_CHARS:
                    raise InvalidEnvError(f"unknown cell {ch!r} at ({x}, {y})")
        if len(marks["S"]) != 1 or len(marks["G"]) != 1:
            raise InvalidEnvError("environment needs exactly one S and one G")
        if len(marks["B"]) != len(marks["T"]) or len(marks["B"]) > 1:
            raise InvalidEnvError("a push puzzle needs exactly one B and one T")
        box = marks["B"][0] if marks["B"] else None
        target = marks["T"][0] if marks["T"] else None
        if box is not None and box == marks["S"][0]:
            raise InvalidEnvError("box cannot start on the agent")
        return cls(
            width,
            len(lines),
            frozenset(walls),
            marks["S"][0],
            marks["G"][0],
            box,
            target,
        )


def load_environment(path) -> Environment:
    with open(path, "r", encoding="utf-8") as fh:
        return Environment.from_text(fh.read())


def step(env: Environment, state: State, delta: tuple[int, int]) -> Optional[State]:
    ax, ay = state.agent
    nxt = (ax + delta[0], ay + delta[1])
    if not env.is_free(nxt):
        return None
    if state.box is not None and nxt == state.box:
        beyond = (nxt[0] + delta[0], nxt[1] + delta[1])
        if not env.is_free(beyond):
            return None
        return State(nxt, beyond)
    return State(nxt, state.box)


def moves_of(path: list[State]) -> list[str]:
    out = []
    for a, b in zip(path, path[1:]):
        delta = (b.agent[0] - a.agent[0], b.agent[1] - a.agent[1])
        out.append(next(name for name, d in DIRECTIONS if d == delta))
    return out


@dataclass(frozen=True)
class Solution:
    path: tuple[State, ...]
    concept: int

    @property
    def moves(self) -> list[str]:
        return moves_of(list(self.path))


@dataclass(frozen=True)
class NoSolution:
    pass


@dataclass
class TraceRecord:
    step: int
    event: str  # activate|create_node|cancel|inhibit|branch|merge|solution|no_solution|conflict
    subject: str
    session_depth: int

    def to_line(self) -> str:
        return f"{self.step}\t{self.event}\t{self.subject}\t{self.session_depth}"


class TraceRecorder:
    def __init__(self):
        self.records: list[TraceRecord] = []

    def emit(self, event: str, subject, depth: int) -> None:
        self.records.append(TraceRecord(len(self.records), event, str(subject), depth))

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records:
                fh.write(rec.to_line() + "\n")


def _state_label(state: State) -> str:
    label = f"state:{state.agent[0]},{state.agent[1]}"
    if state.box is not None:
        label += f":{state.box[0]},{state.box[1]}"
    return label


class StateSpace:
    """Reachable states of an environment plus their concept nodes."""

    def __init__(self, env: Environment, graph: ConceptGraph | None = None):
        self.env = env
        self.graph = graph if graph is not None else ConceptGraph()
        start = env.start_state
        if not env.is_free(env.start) or not env.is_free(env.goal):
            raise InvalidEnvError("start or goal on a wall")
        if env.box is not None and (
            not env.is_free(env.box) or not env.is_free(env.box_target)
        ):
            raise InvalidEnvError("box or box target on a wall")
        self.states: list[State] = [start]
        self.transitions: dict[State, list[State]] = {}
        seen = {start}
        queue = [start]
        while queue:
            cur = queue.pop(0)
            succs = []
            for _, delta in DIRECTIONS:
                nxt = step(env, cur, delta)
                if nxt is not None and nxt != cur and nxt not in succs:
                    succs.append(nxt)
                    if nxt not in seen:
                        seen.add(nxt)
                        self.states.append(nxt)
                        queue.append(nxt)
            self.transitions[cur] = succs
        self.predecessors: dict[State, list[State]] = {s: [] for s in self.states}
        for s in self.states:
            for t in self.transitions[s]:
                self.predecessors[t].append(s)
        self.node_of: dict[State, int] = {}
        for s in self.states:
            self.node_of[s] = self.graph.create_atom(NodeKind.STATE, _state_label(s))
        self.state_of = {n: s for s, n in self.node_of.items()}
        self.goal_state = env.goal_state
        self.targets = {s for s in self.states if s == self.goal_state}

    def view(self) -> StateGraphView:
        return StateGraphView(
            states=set(self.node_of.values()),
            transitions={
                self.node_of[s]: [self.node_of[t] for t in self.transitions[s]]
                for s in self.states
            },
            targets={self.node_of[s] for s in self.targets},
        )


def build_state_graph(env: Environment, graph: ConceptGraph | None = None) -> StateSpace:
    return StateSpace(env, graph)


def _cul_de_sac_cells(env: Environment) -> set[tuple[int, int]]:
    """Iterated dead-end filling; start and goal cells are protected."""
    open_cells = {
        (x, y)
        for x in range(env.width)
        for y in range(env.height)
        if env.is_free((x, y))
    }
    removed: set[tuple[int, int]] = set()
    changed = True
    while changed:
        changed = False
        for cell in sorted(open_cells - removed):
            if cell in (env.start, env.goal):
                continue
            nbrs = sum(
                1
                for _, (dx, dy) in DIRECTIONS
                if (cell[0] + dx, cell[1] + dy) in open_cells - removed
            )
            if nbrs <= 1:
                removed.add(cell)
                changed = True
    return removed


def prune_deadlocks(
    space: StateSpace,
    sessions: SessionStack,
    trace: TraceRecorder | None = None,
) -> set[State]:
    """Inhibit states that cannot take part in any solution.

    Covers states from which the goal state is unreachable (the rule-C
    fixpoint closed over cycles, which inhibits e.g. every state with the
    box in a non-target corner) and, for mazes, iterated cul-de-sac cells.
    """
    alive: set[State] = set()
    queue = [s for s in space.targets]
    alive.update(queue)
    while queue:
        cur = queue.pop()
        for pred in space.predecessors[cur]:
            if pred not in alive:
                alive.add(pred)
                queue.append(pred)
    dead = {s for s in space.states if s not in alive}
    if space.env.kind == "Maze":
        culs = _cul_de_sac_cells(space.env)
        dead |= {s for s in space.states if s.agent in culs}
    for s in sorted(dead, key=lambda s: space.node_of[s]):
        if not sessions.is_inhibited(space.node_of[s]):
            sessions.inhibit(space.node_of[s])
            if trace is not None:
                trace.emit("inhibit", _state_label(s), sessions.depth)
    return dead


def _inhibited_sequences(space: StateSpace, sessions: SessionStack) -> set[tuple[int, ...]]:
    out = set()
    for n in sessions.inhibited_nodes():
        node = space.graph.nodes.get(n)
        if node is None or node.kind is not NodeKind.SOLUTION:
            continue
        entries = sorted(space.graph.children_of(n), key=lambda e: e[1][0])
        out.add(tuple(child for child, _ in entries))
    return out


def _register_solution(space: StateSpace, path: list[State]) -> int:
    children = [(space.node_of[s], (i, 0)) for i, s in enumerate(path)]
    concept = space.graph.create_composite(children, kind=NodeKind.SOLUTION)
    node = space.graph.nodes[concept]
    if not node.label:
        node.label = f"solution:{concept}"
    return concept


class _Branch:
    __slots__ = ("path", "visited")

    def __init__(self, path: list[State]):
        self.path = path
        self.visited = set(path)

    @property
    def head(self) -> State:
        return self.path[-1]

    def extended(self, state: State) -> "_Branch":
        b = _Branch.__new__(_Branch)
        b.path = self.path + [state]
        b.visited = self.visited | {state}
        return b


def solve(
    space: StateSpace,
    sessions: SessionStack | None = None,
    trace: TraceRecorder | None = None,
):
    """Bidirectional branch search; returns Solution or NoSolution."""
    if sessions is None:
        sessions = SessionStack(space.graph)
    sessions.begin_session()
    try:
        prune_deadlocks(space, sessions, trace)
        rejected = _inhibited_sequences(space, sessions)

        def is_inhibited(state: State) -> bool:
            return sessions.is_inhibited(space.node_of[state])

        start, goal = space.env.start_state, space.goal_state
        if goal not in space.transitions or is_inhibited(start) or is_inhibited(goal):
            if trace is not None:
                trace.emit("no_solution", "unreachable", sessions.depth)
            return NoSolution()

        forward = [_Branch([start])]
        backward = [_Branch([goal])]
        if trace is not None:
            trace.emit("branch", "forward:" + _state_label(start), sessions.depth)
            trace.emit("branch", "backward:" + _state_label(goal), sessions.depth)

        def check_meetings() -> Optional[list[State]]:
            back_heads: dict[State, list[_Branch]] = {}
            for b in backward:
                back_heads.setdefault(b.head, []).append(b)
            for f in forward:
                for b in back_heads.get(f.head, ()):
                    joined = f.path + b.path[-2::-1]
                    if len(set(joined)) != len(joined):
                        continue
                    seq = tuple(space.node_of[s] for s in joined)
                    if seq in rejected:
                        continue
                    if trace is not None:
                        trace.emit("merge", _state_label(f.head), sessions.depth)
                    return joined
            return None

        def expand(branches: list[_Branch], adjacency, terminal: State) -> list[_Branch]:
            out: list[_Branch] = []
            for br in branches:
                if br.head == terminal and len(br.path) > 1:
                    if trace is not None:
                        trace.emit("inhibit", "branch:" + _state_label(br.head), sessions.depth)
                    continue
                succs = [
                    s
                    for s in adjacency[br.head]
                    if s not in br.visited and not is_inhibited(s)
                ]
                if not succs:
                    if trace is not None:
                        trace.emit("inhibit", "branch:" + _state_label(br.head), sessions.depth)
                    continue
                for s in succs:
                    out.append(br.extended(s))
                    if trace is not None and len(succs) > 1:
                        trace.emit("branch", _state_label(s), sessions.depth)
            return out

        met = check_meetings()
        while met is None and forward and backward:
            forward = expand(forward, space.transitions, goal)
            if not forward:
                break
            met = check_meetings()
            if met is not None:
                break
            backward = expand(backward, space.predecessors, start)
            if not backward:
                break
            met = check_meetings()

        if met is None:
            if trace is not None:
                trace.emit("no_solution", "all branches inhibited", sessions.depth)
            return NoSolution()
        concept = _register_solution(space, met)
        if trace is not None:
            trace.emit("create_node", f"solution:{concept}", sessions.depth)
            trace.emit("solution", ".".join(moves_of(met)), sessions.depth)
        return Solution(tuple(met), concept)
    finally:
        sessions.release_session()


def enumerate_solutions(
    space: StateSpace,
    max_solutions: int | None = None,
    trace: TraceRecorder | None = None,
) -> list[Solution]:
    """Repeatedly solve, inhibiting each found solution concept."""
    sessions = SessionStack(space.graph)
    solutions: list[Solution] = []
    opened = 0
    try:
        while max_solutions is None or len(solutions) < max_solutions:
            result = solve(space, sessions, trace)
            if isinstance(result, NoSolution):
                break
            solutions.append(result)
            sessions.begin_session()
            opened += 1
            sessions.inhibit(result.concept)
    finally:
        for _ in range(opened):
            sessions.release_session()
    return solutions


def solve_with_constraints(
    space: StateSpace,
    forbidden: set[tuple[int, int]],
    trace: TraceRecorder | None = None,
):
    """Solve with the given agent cells inhibited as permanent base knowledge."""
    sessions = SessionStack(space.graph)
    for s in space.states:
        if s.agent in forbidden:
            sessions.inhibit(space.node_of[s])
            if trace is not None:
                trace.emit("inhibit", _state_label(s), sessions.depth)
    return solve(space, sessions, trace)
