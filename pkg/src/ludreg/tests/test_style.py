import os

import pytest

pycodestyle = pytest.importorskip('pycodestyle')

SRC = os.path.dirname(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))))


def test01_line_length_and_whitespace():
    # Tabs, trailing whitespace and the 79 column limit
    style = pycodestyle.StyleGuide(
        quiet=True, max_line_length=79,
        select=['E101', 'E501', 'W191', 'W291', 'W293'])
    report = style.check_files([SRC])
    assert report.total_errors == 0, report.get_statistics()
