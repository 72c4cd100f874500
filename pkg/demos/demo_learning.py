"""Observe a few patterns, then reconstruct them from their concept nodes.

The point of the demo: representations are generative. Whatever the
learner stores, it can draw back, byte for byte, even after learning
other patterns in between.
"""

from gridmind import Grid, Learner

PATTERNS = {
    "ring": "xxx\nx.x\nxxx\n",
    "ell": "y..\ny..\nyyy\n",
    "bar": "zzzzz\n",
}


def main():
    learner = Learner()
    roots = {}
    for name, text in PATTERNS.items():
        report = learner.observe(Grid.from_text(text))
        roots[name] = report.root
        print(f"observed {name!r}: root node {report.root}, "
              f"{report.nodes_created} created, {report.nodes_reused} reused")

    print()
    for name, root in roots.items():
        print(f"reconstruction of {name!r} (node {root}):")
        print(learner.reconstruct(root).to_text())

    # observing the same pattern again creates nothing new
    again = learner.observe(Grid.from_text(PATTERNS["ring"]))
    print(f"re-observing 'ring': {again.nodes_created} created "
          f"(same root: {again.root == roots['ring']})")


if __name__ == "__main__":
    main()
