import pytest

import hermharm.cli as cli
import hermharm.model as model

ACCEPTANCE_LINES: list[str] = []


def corrupt_torsion(monkeypatch):
    """Build structures with a corrupted torsion operator so identities fail."""
    real_build = cli.build_structure

    def corrupted(spec, *args, **kwargs):
        h = real_build(spec, *args, **kwargs)
        h.ops["tau"] = h.ops["tau"].scale(2)
        h.ops["tau*"] = h.ops["tau"].adjoint()
        return h

    monkeypatch.setattr(cli, "build_structure", corrupted)


def double_omega(monkeypatch):
    """Double the fundamental form behind the builder's back, so [L, Lam] is not the weight."""
    real_omega = model.build_omega

    def doubled(spec, scale=1):
        return real_omega(spec, 2 * scale)

    monkeypatch.setattr(model, "build_omega", doubled)


@pytest.fixture
def inject_identity_failure(monkeypatch):
    corrupt_torsion(monkeypatch)


@pytest.fixture
def inject_convention_failure(monkeypatch):
    double_omega(monkeypatch)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
