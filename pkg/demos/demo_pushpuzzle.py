"""A single-box push puzzle, with deadlock states pruned up front.

States that push the box into a non-target corner can never be undone;
they are inhibited before the search, which therefore never wastes time
behind the point of no return. A box that starts in a corner makes the
whole puzzle unsolvable.
"""

from gridmind import (
    Environment,
    NoSolution,
    SessionStack,
    StateSpace,
    prune_deadlocks,
    solve,
)

PUZZLE = "S....\n.B...\n...T.\n....G\n.....\n"
HOPELESS = "S...B\n.....\n..T..\n.....\n....G\n"


def main():
    env = Environment.from_text(PUZZLE)
    print(PUZZLE)

    space = StateSpace(env)
    sessions = SessionStack(space.graph)
    dead = prune_deadlocks(space, sessions)
    corners = {s.box for s in dead if s.box is not None}
    print(f"{len(space.states)} reachable states, {len(dead)} pruned as deadlocks")
    print(f"unrecoverable box positions include: {sorted(corners)[:4]} ...")

    result = solve(StateSpace(env))
    print(f"\nsolution in {len(result.moves)} moves: {' '.join(result.moves)}")

    hopeless = Environment.from_text(HOPELESS)
    outcome = solve(StateSpace(hopeless))
    print("\nbox starting in a corner:",
          "no solution" if isinstance(outcome, NoSolution) else "solved?!")


if __name__ == "__main__":
    main()
