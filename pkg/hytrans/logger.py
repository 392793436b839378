__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import logging as _logging
import os
import platform
import sys
from pathlib import Path
from typing import Text, TextIO, Union


class ColorizingStreamHandler(_logging.StreamHandler):
    BLACK, RED, GREEN, YELLOW, BLUE, MAGENTA, CYAN, WHITE = range(8)
    RESET_SEQ = "\033[0m"
    COLOR_SEQ = "\033[%dm"

    colors = {
        "WARNING": YELLOW,
        "INFO": GREEN,
        "DEBUG": BLUE,
        "CRITICAL": RED,
        "ERROR": RED,
    }

    def __init__(
        self,
        nocolor: bool = False,
        stream: Union[Text, Path, TextIO] = sys.stderr,
    ):
        """
        Create a new ColorizingStreamHandler

        :param nocolor: do not use color
        :type nocolor: bool
        :param stream: stream to write records to
        :type stream: TextIO
        """
        super().__init__(stream=stream)
        self.nocolor = nocolor or not self.can_color_tty()

    def can_color_tty(self) -> bool:
        """
        Determine if the tty supports color
        """
        if os.environ.get("TERM") == "dumb" or "NO_COLOR" in os.environ:
            return False
        return self.is_tty and not platform.system() == "Windows"

    @property
    def is_tty(self) -> bool:
        isatty = getattr(self.stream, "isatty", None)
        return bool(isatty and isatty())

    def emit(self, record: _logging.LogRecord):
        """
        Emit a log record.

        :param record: the record to emit
        :type record: logging.LogRecord
        """
        try:
            self.format(record)
            self.stream.write(self.decorate(record) + self.terminator)
            self.flush()
        except BrokenPipeError:
            raise
        except Exception:
            self.handleError(record)

    def decorate(self, record) -> str:
        message = [record.message]
        if not self.nocolor and record.levelname in self.colors:
            message.insert(0, self.COLOR_SEQ % (30 + self.colors[record.levelname]))
            message.append(self.RESET_SEQ)
        return "".join(message)


class Logger:
    def __init__(self):
        """
        Create the package logger. Messages are dicts routed through handlers.
        """
        self.logger = _logging.getLogger("hytrans")
        self.log_handler = [self.text_handler]
        self.stream_handler = None
        self.quiet = False

    def handler(self, msg: dict):
        """
        Hand a message to every registered handler.

        :param msg: the message to handle
        :type msg: dict
        """
        for handler in self.log_handler:
            handler(msg)

    def set_stream_handler(self, stream_handler: _logging.Handler):
        """
        Replace the stream handler.

        :param stream_handler: the stream handler
        :type stream_handler: logging.Handler
        """
        if self.stream_handler is not None:
            self.logger.removeHandler(self.stream_handler)
        self.stream_handler = stream_handler
        self.logger.addHandler(stream_handler)

    def set_level(self, level: int):
        self.logger.setLevel(level)

    def info(self, msg: str):
        self.handler({"level": "info", "msg": msg})

    def warning(self, msg: str):
        self.handler({"level": "warning", "msg": msg})

    def debug(self, msg: str):
        self.handler({"level": "debug", "msg": msg})

    def error(self, msg: str):
        self.handler({"level": "error", "msg": msg})

    def exit(self, msg: str, return_code: int = 1):
        """
        Error level message and exit with error code

        :param msg: the exiting (error) message
        :type msg: str
        :param return_code: return code to exit on
        :type return_code: int
        """
        self.handler({"level": "error", "msg": msg})
        sys.exit(return_code)

    def progress(self, done: int, total: int, unit: str = "steps"):
        """
        Report progress of a sweep or a Monte Carlo run.

        :param done: count of total that is complete
        :type done: int
        :param total: count of total
        :type total: int
        :param unit: what is being counted
        :type unit: str
        """
        self.handler({"level": "progress", "done": done, "total": total, "unit": unit})

    def check(self, name: str, deviation: float, threshold: float) -> bool:
        """
        Report a numerical comparison and return whether it passed.

        :param name: name of the comparison
        :type name: str
        :param deviation: the measured deviation
        :type deviation: float
        :param threshold: largest accepted deviation
        :type threshold: float
        """
        passed = bool(deviation <= threshold)
        self.handler(
            {
                "level": "check",
                "name": name,
                "deviation": deviation,
                "threshold": threshold,
                "passed": passed,
            }
        )
        return passed

    def text_handler(self, msg: dict):
        """
        The default handler, printing to the console.

        :param msg: the log message dict
        :type msg: dict
        """
        level = msg["level"]
        if level == "info" and not self.quiet:
            self.logger.info(msg["msg"])
        elif level == "warning":
            self.logger.warning(msg["msg"])
        elif level == "error":
            self.logger.error(msg["msg"])
        elif level == "debug":
            self.logger.debug(msg["msg"])
        elif level == "progress" and not self.quiet:
            p = msg["done"] / msg["total"]
            percent_fmt = ("{:.2%}" if p < 0.01 else "{:.0%}").format(p)
            self.logger.info(
                "{} of {} {} ({}) done".format(
                    msg["done"], msg["total"], msg["unit"], percent_fmt
                )
            )
        elif level == "check":
            status = "PASS" if msg["passed"] else "FAIL"
            line = "{}: max|delta| = {:.3e} (threshold {:.1e}) {}".format(
                msg["name"], msg["deviation"], msg["threshold"], status
            )
            if msg["passed"]:
                self.logger.info(line)
            else:
                self.logger.error(line)


logger = Logger()


def setup_logger(
    quiet: bool = False,
    nocolor: bool = False,
    stdout: bool = False,
    debug: bool = False,
):
    """
    Setup the logger. This should be called from the command line client.

    :param quiet: suppress info and progress messages
    :type quiet: bool
    :param nocolor: do not use color
    :type nocolor: bool
    :param stdout: print to standard output for the logger
    :type stdout: bool
    :param debug: debug level logging
    :type debug: bool
    """
    stream_handler = ColorizingStreamHandler(
        nocolor=nocolor,
        stream=sys.stdout if stdout else sys.stderr,
    )
    level = _logging.DEBUG if debug else _logging.INFO
    logger.set_stream_handler(stream_handler)
    logger.set_level(level)
    logger.quiet = quiet
