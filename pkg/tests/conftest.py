import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import crossmetric.ann
import crossmetric.cli
import crossmetric.embedding
from crossmetric.embedding import label_collisions

_embed = crossmetric.embedding.embed_points
COLLISIONS = {"embeddings": 0, "collisions": 0}


def _audited_embed(inst, spec):
    """Every embedding built anywhere in the suite is checked for hash collisions."""
    e = _embed(inst, spec)
    bad = label_collisions(inst, e)
    COLLISIONS["embeddings"] += 1
    COLLISIONS["collisions"] += bad
    assert bad == 0, f"{bad} label collisions at r={spec.r}"
    return e


for module in (crossmetric.embedding, crossmetric.ann, crossmetric.cli):
    module.embed_points = _audited_embed

_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        n, title = props["criterion"]
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _criteria[n] = (title, status, props.get("detail", ""))


@pytest.fixture
def criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    record_property("criterion", tuple(marker.args))

    def detail(text: str) -> None:
        record_property("detail", text)

    return detail


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, status, detail = _criteria[n]
        line = f"criterion {n:2d} {status}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
    terminalreporter.write_line(
        f"label-collision audit: {COLLISIONS['collisions']} collisions over {COLLISIONS['embeddings']} embeddings"
    )
