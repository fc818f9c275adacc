"""Seeded random models, fields and expressions for the property suites.

Constant-structure models are built from known Lie algebras (abelian,
Heisenberg, so(3), suspension bracket tables) conjugated by random
orthogonal matrices, so the Jacobi identity genuinely holds.  Chart
models use frames of the form rotation(theta) * diag(exp g_i), which
are invertible everywhere by construction.
"""

from __future__ import annotations

import random

import numpy as np

import transdiv as td
from transdiv import expr


def trig_poly(rng: random.Random, dim: int, amplitude: float = 0.4) -> expr.Expr:
    """c0 + sum of small sin/cos(2 pi x_j) terms: smooth and periodic."""
    node: expr.Expr = expr.Literal(round(rng.uniform(-1.0, 1.0), 6))
    for _ in range(rng.randint(1, 2)):
        coord = f"x{rng.randint(1, dim)}"
        coeff = round(rng.uniform(-amplitude, amplitude), 6)
        fn = rng.choice(("sin", "cos"))
        arg = expr.mul(expr.mul(expr.Literal(2.0), expr.Constant("pi")), expr.Variable(coord))
        node = expr.add(node, expr.mul(expr.Literal(coeff), expr.FunctionCall(fn, arg)))
    return node


def random_chart_case(rng: random.Random) -> tuple[td.FrameModel, td.FoliationSplit]:
    dim = rng.choice((2, 2, 3))
    theta = trig_poly(rng, dim)
    gs = [trig_poly(rng, dim) for _ in range(dim)]
    exps = [expr.FunctionCall("exp", g) for g in gs]
    cos_t = expr.FunctionCall("cos", theta)
    sin_t = expr.FunctionCall("sin", theta)
    rows: list[list[expr.Expr]] = [
        [expr.ZERO] * dim for _ in range(dim)
    ]
    # rotate the (x1, x2) plane, stretch every axis: det = exp(sum g) != 0
    rows[0][0] = expr.mul(cos_t, exps[0])
    rows[0][1] = expr.neg(expr.mul(sin_t, exps[1]))
    rows[1][0] = expr.mul(sin_t, exps[0])
    rows[1][1] = expr.mul(cos_t, exps[1])
    for m in range(2, dim):
        rows[m][m] = exps[m]
    model = td.chart_model(
        name=f"random-chart-{dim}d",
        periods=(1.0,) * dim,
        frame=rows,
        dense_leaves=False,
    )
    split = td.foliation_split(dim, {0})
    return model, split


_BASE_ALGEBRAS = ("abelian", "heisenberg", "so3", "suspension")


def random_constant_case(
    rng: random.Random,
) -> tuple[td.FrameModel, td.FoliationSplit]:
    kind = rng.choice(_BASE_ALGEBRAS)
    if kind == "suspension":
        matrix = random_admissible_matrix(rng, rng.choice((2, 3)))
        model, split = td.build_suspension(matrix, rng.randint(1, len(matrix)))
        return model, split
    dim = 3
    scale = round(rng.uniform(0.3, 2.0), 6)
    if kind == "abelian":
        base = []
    elif kind == "heisenberg":
        base = [(0, 1, 2, scale)]
    else:  # so(3) scaled: [e1,e2]=c e3, [e2,e3]=c e1, [e1,e3]=-c e2
        base = [(0, 1, 2, scale), (1, 2, 0, scale), (0, 2, 1, -scale)]
    table = np.zeros((dim, dim, dim))
    for i, j, k, value in base:
        table[i, j, k] = value
        table[j, i, k] = -value
    q, _ = np.linalg.qr(
        np.array([[rng.gauss(0, 1) for _ in range(dim)] for _ in range(dim)])
    )
    rotated = np.einsum("ai,bj,ck,ijk->abc", q, q, q, table)
    constants = [
        (i, j, k, float(rotated[i, j, k]))
        for i in range(dim)
        for j in range(i + 1, dim)
        for k in range(dim)
    ]
    model = td.constant_structure_model(
        name=f"random-{kind}", dim=dim, constants=constants
    )
    split = td.foliation_split(dim, {rng.randrange(dim)})
    return model, split


def random_admissible_matrix(rng: random.Random, n: int) -> tuple[tuple[int, ...], ...]:
    """Hyperbolic SL(n, Z) matrices with real, simple, positive spectrum."""
    if n == 2:
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        return ((1 + a * b, a), (b, 1))
    # B unitriangular => B B^T is integer, symmetric positive definite with
    # det 1: eigenvalues real and positive, generically simple and != 1
    for _ in range(200):
        lower = np.eye(n, dtype=object)
        for i in range(n):
            for j in range(i):
                lower[i][j] = rng.randint(-2, 2)
        product = lower @ lower.T
        rows = tuple(tuple(int(x) for x in row) for row in product)
        if td.validate_suspension_matrix(rows).admissible:
            return rows
    raise RuntimeError("no admissible matrix found; widen the search")


def random_field(
    rng: random.Random,
    model: td.FrameModel,
    split: td.FoliationSplit,
    transverse_only: bool = False,
) -> td.VectorFieldSpec:
    components: list[expr.Expr] = []
    for k in range(model.dim):
        if transverse_only and k in split.leaf:
            components.append(expr.ZERO)
        elif model.is_chart:
            components.append(trig_poly(rng, model.dim))
        else:
            components.append(expr.Literal(round(rng.uniform(-2.0, 2.0), 6)))
    return td.vector_field(components, model)


def identity_cases(seed: int, count: int = 20):
    """Mixed constant/chart cases for the frame-identity suites."""
    rng = random.Random(seed)
    cases = []
    for index in range(count):
        if index % 2 == 0:
            cases.append(random_constant_case(rng))
        else:
            cases.append(random_chart_case(rng))
    return cases


def grid_points(model: td.FrameModel, count: int = 20) -> list[tuple[float, ...]]:
    if not model.is_chart:
        return [()]
    if model.dim == 2:
        grid = td.sample_grid(model, (5, 4))
    else:
        grid = td.sample_grid(model, (3, 3, 2))
    return list(grid.points)[:count]


def random_expression(rng: random.Random, variables: tuple[str, ...], depth: int = 0) -> expr.Expr:
    """Arbitrary grammar-covering expressions with bounded magnitudes."""
    if depth >= 3 or rng.random() < 0.3:
        choice = rng.random()
        if choice < 0.4:
            return expr.Literal(round(rng.uniform(-8.0, 8.0), 4))
        if choice < 0.8:
            return expr.Variable(rng.choice(variables))
        return expr.Constant(rng.choice(("pi", "e")))
    choice = rng.random()
    if choice < 0.15:
        return expr.Negate(random_expression(rng, variables, depth + 1))
    if choice < 0.60:
        op = rng.choice(("+", "-", "*"))
        return expr.BinaryOp(
            op,
            random_expression(rng, variables, depth + 1),
            random_expression(rng, variables, depth + 1),
        )
    if choice < 0.70:
        # keep quotients well-conditioned: denominator bounded away from 0
        denominator = expr.add(
            expr.Literal(float(rng.randint(2, 4))),
            expr.FunctionCall("sin", random_expression(rng, variables, depth + 1)),
        )
        return expr.BinaryOp(
            "/", random_expression(rng, variables, depth + 1), denominator
        )
    if choice < 0.80:
        base = expr.add(
            expr.Literal(float(rng.randint(2, 3))),
            expr.FunctionCall("cos", random_expression(rng, variables, depth + 1)),
        )
        return expr.BinaryOp("^", base, expr.Literal(float(rng.randint(2, 3))))
    fn = rng.choice(("sin", "cos", "exp"))
    argument = random_expression(rng, variables, depth + 1)
    if fn == "exp":
        # bound the argument so magnitudes stay tame
        argument = expr.FunctionCall("sin", argument)
    return expr.FunctionCall(fn, argument)


def random_env(rng: random.Random, variables: tuple[str, ...]) -> dict[str, float]:
    return {name: rng.uniform(-2.0, 2.0) for name in variables}
