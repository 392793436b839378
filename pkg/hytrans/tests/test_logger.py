__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import io
import logging

import pytest

from hytrans.logger import ColorizingStreamHandler, Logger


@pytest.fixture
def quiet_logger():
    log = Logger()
    log.logger = logging.getLogger("hytrans.tests.logger")
    log.logger.propagate = False
    stream = io.StringIO()
    log.set_stream_handler(ColorizingStreamHandler(nocolor=True, stream=stream))
    log.set_level(logging.DEBUG)
    yield log, stream
    log.logger.removeHandler(log.stream_handler)


def test_check(quiet_logger):
    print("Testing logger.check...")
    log, stream = quiet_logger
    assert log.check("pair transfer oracle", 1e-12, 1e-9)
    assert not log.check("pair transfer explicit", 1e-3, 1e-8)
    lines = stream.getvalue().splitlines()
    assert lines[0].endswith("PASS")
    assert lines[1].endswith("FAIL")
    assert "1.000e-03" in lines[1]


def test_progress_and_quiet(quiet_logger):
    log, stream = quiet_logger
    log.progress(3, 4, "seeds")
    assert stream.getvalue().strip() == "3 of 4 seeds (75%) done"

    log.quiet = True
    log.progress(4, 4, "seeds")
    log.info("hidden")
    log.warning("shown")
    assert stream.getvalue().splitlines()[-1] == "shown"


def test_no_color_on_plain_streams():
    handler = ColorizingStreamHandler(stream=io.StringIO())
    assert handler.nocolor


def test_exit(quiet_logger):
    log, stream = quiet_logger
    with pytest.raises(SystemExit) as exc:
        log.exit("bad input", 2)
    assert exc.value.code == 2
    assert "bad input" in stream.getvalue()
