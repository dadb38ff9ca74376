import pytest

from gp2d.config import parse_config_text
from gp2d.errors import ConfigError

GOOD = """\
# harmonic well sweep
potential = power_well h0=1 p=2 rcut=8
L = 16
n = 512
a_schedule = geom:0.05,0.65,7
tol = 3e-6
max_iters = 40000
out_dir = report
box_check = on
"""


def test_parse_good():
    cfg = parse_config_text(GOOD)
    assert cfg.potential.kind == "power_well"
    assert cfg.L == 16.0 and cfg.n == 512
    assert cfg.tol == 3e-6
    assert cfg.box_check is True


def test_geometric_schedule():
    cfg = parse_config_text(GOOD)
    sched = cfg.schedule(10.0)
    assert len(sched) == 7
    assert sched[0] == pytest.approx(10.0 * 0.95)
    assert sched[1] == pytest.approx(10.0 * (1.0 - 0.05 * 0.65))
    assert all(b > a for a, b in zip(sched, sched[1:]))


def test_explicit_schedule():
    cfg = parse_config_text("potential = zero\nL = 8\nn = 32\na_schedule = 1.0, 2.0, 3.5\n")
    assert cfg.schedule(99.0) == [1.0, 2.0, 3.5]


@pytest.mark.parametrize(
    "text",
    [
        "potential = zero\nL = 8\nn = 32\n",  # missing a_schedule
        "potential = zero\nL = 8\nn = 32\na_schedule = 1\nbogus = 1\n",
        "potential = zero\nL = 8\nn = 32\na_schedule = geom:2,0.5,3\n",
        "potential = zero\nL = 8\nn = 32\na_schedule = one,two\n",
        "potential = zero\nL = 8\nn = 33\na_schedule = 1\n",
        "potential = zero\nL = 8\nn = 32\na_schedule = 1\nL = 9\n",  # duplicate
        "potential zero\nL = 8\nn = 32\na_schedule = 1\n",  # no equals
        "potential = zero\nL = 8\nn = 32\na_schedule = 1\nbox_check = maybe\n",
    ],
)
def test_parse_rejects(text):
    # bad schedules surface when resolved; everything else at parse time
    with pytest.raises(ConfigError):
        parse_config_text(text).schedule(10.0)


def test_comments_and_blank_lines():
    cfg = parse_config_text("\n# hi\npotential = zero  # inline\nL = 8\nn = 32\na_schedule = 1\n")
    assert cfg.potential.kind == "zero"
