import numpy as np
import pytest

from activeflux.grid import GHOST, BoundaryCondition, GridSpec, allocate, fill_ghosts

GQ_X, GQ_W = np.polynomial.legendre.leggauss(8)


def field_from_function(spec: GridSpec, fn):
    """DofField whose dofs sample fn(x, y) -> (..., 4) conserved values.

    Point values are exact samples; cell averages use 8x8 tensor Gauss
    quadrature (exact for the polynomial data used in the tests).
    """
    f = allocate(spec)
    nx, ny, G = spec.nx, spec.ny, GHOST

    def grid_eval(xs, ys):
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return np.asarray(fn(X, Y), float)

    xn = spec.x0 + spec.dx * np.arange(nx + 1)
    yn = spec.y0 + spec.dy * np.arange(ny + 1)
    xc = spec.x0 + spec.dx * (np.arange(nx) + 0.5)
    yc = spec.y0 + spec.dy * (np.arange(ny) + 0.5)
    f.nodes[G:G + nx + 1, G:G + ny + 1] = grid_eval(xn, yn)
    f.xedges[G:G + nx + 1, G:G + ny] = grid_eval(xn, yc)
    f.yedges[G:G + nx, G:G + ny + 1] = grid_eval(xc, yn)

    qx = (xc[:, None] + 0.5 * spec.dx * GQ_X[None, :]).ravel()
    qy = (yc[:, None] + 0.5 * spec.dy * GQ_X[None, :]).ravel()
    vals = grid_eval(qx, qy).reshape(nx, GQ_X.size, ny, GQ_X.size, 4)
    w = 0.5 * GQ_W
    f.averages[G:G + nx, G:G + ny] = np.einsum("iajb...,a,b->ij...", vals, w, w)
    return fill_ghosts(f)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


ACCEPTANCE_VERDICTS: list = []


def record_verdict(line: str) -> None:
    """Collect acceptance banner lines for the end-of-run summary."""
    ACCEPTANCE_VERDICTS.append(line)


def pytest_terminal_summary(terminalreporter):
    # replay the banners outside output capture so they reach the run log
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)
