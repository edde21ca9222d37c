"""Brute-force prime repairs for graph-colouring.json.

Independent of the Rust code: evaluates the three constraints directly and
walks every well-defined subset of the colour-change and edge-change pool.
Macros with no effect and macros adding a loop are dropped first; neither can
appear in a prime repair. Writes graph-colouring.expected.json.
"""
import itertools
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent.parent
VERTICES = [1, 2, 3, 4, 5]
COLOURS = ["q1", "q2", "q3"]


def load():
    inst = json.loads((HERE / "graph-colouring.json").read_text())
    edges, colour = set(), {}
    for f in inst["functions"]:
        for row in f["table"]:
            if not row[-1]:
                continue
            if f["name"] == "p":
                edges.add((row[0], row[1]))
            else:
                colour.setdefault(row[0], set()).add(f["name"])
    return edges, colour


def holds(edges, colour):
    if any(len(colour.get(v, set())) != 1 for v in VERTICES):
        return False
    if any((y, x) not in edges for (x, y) in edges):
        return False
    return all(not (colour[x] & colour[y]) for (x, y) in edges)


def pool(edges, colour):
    out = []
    for v in VERTICES:
        for q in COLOURS:
            if colour.get(v) != {q}:
                out.append(("colour", v, q))
    for i, x in enumerate(VERTICES):
        for y in VERTICES[i:]:
            for b in (False, True):
                present = (x, y) in edges
                if present == b or (x == y and b):
                    continue
                out.append(("edge", x, y, b))
    return out


def cells(m):
    return ("c", m[1]) if m[0] == "colour" else ("e", m[1], m[2])


def apply(edges, colour, ms):
    edges = set(edges)
    colour = {v: set(c) for v, c in colour.items()}
    for m in ms:
        if m[0] == "colour":
            colour[m[1]] = {m[2]}
        else:
            _, x, y, b = m
            for e in ((x, y), (y, x)):
                (edges.add if b else edges.discard)(e)
    return edges, colour


def label(m):
    if m[0] == "colour":
        return f"colour {m[1]} {m[2]}"
    return f"edge {m[1]}-{m[2]} {'true' if m[3] else 'false'}"


def main():
    edges, colour = load()
    assert not holds(edges, colour)
    ms = pool(edges, colour)
    repairs = []
    for k in range(len(ms) + 1):
        for combo in itertools.combinations(ms, k):
            cs = [cells(m) for m in combo]
            if len(set(cs)) != len(cs):
                continue
            if holds(*apply(edges, colour, combo)):
                repairs.append(frozenset(combo))
    repairs = [r for r in repairs if not any(o < r for o in repairs)]
    expected = sorted(sorted(label(m) for m in r) for r in repairs)
    expected.sort(key=lambda r: (len(r), r))
    out = {"pool_size": len(ms), "prime_repairs": expected}
    (HERE / "graph-colouring.expected.json").write_text(json.dumps(out, indent=1) + "\n")
    print(len(ms), "macros,", len(expected), "prime repairs")


if __name__ == "__main__":
    main()
