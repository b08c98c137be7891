import logging

import pytest


@pytest.fixture(autouse=True)
def _quiet_support_warnings(caplog):
    # several reference setups start with tails of ~1e-6 at the box edge on purpose
    caplog.set_level(logging.ERROR, logger="exactbc")


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import SUMMARY

    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in sorted(SUMMARY):
            terminalreporter.write_line(line)
