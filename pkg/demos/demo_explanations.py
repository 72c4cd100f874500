"""Alternative explanations of an ambiguous observation.

Four features are on the table; two of them (f2, f3) are mutually
exclusive. Four known composites each cover part of the picture. The
search returns every maximal self-consistent reading: one in which f3
is suppressed as an illusion, one in which f2 is.
"""

from gridmind import ConceptGraph, explain_features


def main():
    g = ConceptGraph()
    f = {i: g.create_primitive(f"f{i}") for i in range(1, 5)}
    g.add_mutex(f[2], f[3])  # f2 and f3 cannot both be real
    pad1 = g.create_primitive("pad1")
    pad2 = g.create_primitive("pad2")
    names = {
        g.create_composite([(f[1], (0, 0)), (f[2], (1, 0))]): "A=f1+f2",
        g.create_composite([(f[3], (0, 0)), (f[4], (1, 0))]): "B=f3+f4",
        g.create_composite([(f[4], (0, 0)), (pad1, (1, 0))]): "C=f4+pad",
        g.create_composite([(f[1], (0, 0)), (pad2, (1, 0))]): "D=f1+pad",
    }
    feature_name = {n: f"f{i}" for i, n in f.items()}

    features = set(f.values())
    print("detected features: f1 f2 f3 f4   (mutex: f2 <-> f3)\n")
    for e in explain_features(g, features):
        if e.novel:
            print("novel residue:", sorted(feature_name[n] for n in e.residue))
            continue
        chosen = ", ".join(sorted(names[n] for n in e.chosen))
        suppressed = ", ".join(sorted(feature_name[n] for n in e.suppressed)) or "-"
        print(f"reading: {{{chosen}}}  suppressed: {suppressed}")


if __name__ == "__main__":
    main()
