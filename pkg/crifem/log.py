# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from typing import Literal

class ANSITerm:
    FgBrightYellow = "\x1b[93m"
    BgRed = "\x1b[41m"
    BgGreen = "\x1b[42m"
    Reset = "\x1b[0m"

class Logger:
    def __init__(self, log_levels:bool=True, log_results:bool=True,
            log_fancy:bool=True, debug:bool=False):
        """
        Args:
            log_levels: Enables one line per solved refinement level.
            log_results: Enables printing of convergence tables.
            log_fancy: Enables colorful printing of messages using ANSI
                escape sequences.
            debug: Enables detailed debug output of the numerical pipeline.
        """
        self.configure(log_levels=log_levels, log_results=log_results,
            log_fancy=log_fancy, debug=debug)

    def configure(self, **flags):
        for name, value in flags.items():
            setattr(self, name, value)

    def debug_log(self, message:str):
        """
        Prints debug message, if debug output is enabled by the debug flag.
        """
        if self.debug:
            print(f"[crifem] Debug: {message}")

    def log(self, log_type:Literal["level", "info", "result", "error"], data:str):
        """
        Prints a message prefixed with [crifem]. Level and result messages
        can be disabled through the log_levels and log_results flags; errors
        and info messages are always printed.
        """
        assert log_type in ("level", "info", "result", "error")
        if log_type == "level":
            self.debug_log(f"Level: {data}")
            if not self.log_levels:
                return
            log_symbol = "Level:"
        elif log_type == "result":
            if not self.log_results:
                return
            log_symbol = "Result:"
        elif log_type == "error":
            log_symbol = "Error:"
        elif log_type == "info":
            log_symbol = "Info:"

        style_crifem = ""
        style_reset = ""
        style_symbol = ""

        if self.log_fancy:
            style_crifem = ANSITerm.FgBrightYellow
            style_reset = ANSITerm.Reset
            if log_type == "error":
                style_symbol = ANSITerm.BgRed
            elif log_type == "info":
                style_symbol = ANSITerm.BgGreen

        print(f"{style_crifem}[crifem]{style_reset} {style_symbol}{log_symbol}{style_reset} {data}")

logger = Logger()
"""Process-wide logger. The command-line driver configures it from its flags."""
