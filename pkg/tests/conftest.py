import functools

import pytest

from twoosc.rmatrix import FAMILIES, build_family, derive_relations


@functools.lru_cache(maxsize=None)
def family(name):
    return build_family(name)


@functools.lru_cache(maxsize=None)
def relations(name):
    return derive_relations(family(name))


@functools.lru_cache(maxsize=None)
def rewrite(name):
    return relations(name).rewrite_system(name)


@pytest.fixture(params=FAMILIES)
def fam(request):
    return request.param


ACCEPTANCE = []


def report_criterion(number, title, ok, detail=""):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    print(line)
    ACCEPTANCE.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
