"""Synthetic CNF problems large enough to make search cost visible."""
import random


def reachability(layers: int, width: int, seed: int = 1) -> str:
    """Path search through a layered graph where most edges lead nowhere;
    one node of the last layer reaches the goal."""
    rng = random.Random(seed)
    lines = [
        "cnf(step, axiom, ~edge(X,Y) | ~path(Y,Z) | path(X,Z)).",
        "cnf(base, axiom, ~edge(X,Y) | path(X,Y)).",
        "cnf(goal, negated_conjecture, ~path(n0_0, goal)).",
    ]
    n = 0
    for layer in range(layers):
        for i in range(width):
            for j in rng.sample(range(width), 2):
                lines.append(f"cnf(e{n}, axiom, edge(n{layer}_{i}, n{layer + 1}_{j})).")
                n += 1
    lines.append(f"cnf(e{n}, axiom, edge(n{layers}_{rng.randrange(width)}, goal)).")
    return "\n".join(lines) + "\n"


def pigeonhole(pigeons: int) -> str:
    """``pigeons`` pigeons in one hole fewer; unsatisfiable."""
    holes = pigeons - 1
    lines = []
    for i in range(pigeons):
        lines.append(f"cnf(p{i}, axiom, " + " | ".join(f"in{i}_{k}" for k in range(holes)) + ").")
    n = 0
    for k in range(holes):
        for i in range(pigeons):
            for j in range(i + 1, pigeons):
                lines.append(f"cnf(x{n}, negated_conjecture, ~in{i}_{k} | ~in{j}_{k}).")
                n += 1
    return "\n".join(lines) + "\n"
