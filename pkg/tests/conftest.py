import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sunflower_vc.setsystem import SetSystem

settings.register_profile(
    "default",
    deadline=None,
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "60")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def set_systems(draw, max_n=6, max_members=8, min_members=0, max_size=None):
    n = draw(st.integers(0, max_n))
    cap = n if max_size is None else min(n, max_size)
    masks = draw(
        st.lists(
            st.integers(0, (1 << n) - 1).filter(lambda m: m.bit_count() <= cap),
            min_size=min_members,
            max_size=max_members,
            unique=True,
        )
    )
    return SetSystem(tuple(f"e{i}" for i in range(n)), tuple(masks))


def labelled(ground, sets):
    from sunflower_vc.setsystem import build

    return build([str(g) for g in ground], [[str(x) for x in s] for s in sets])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
