"""
Subcommand Handlers

Each handler takes a CommandContext, adds its artifacts to the context's
writer and returns a result mapping for the command-line summary.
"""

from typing import Callable, Dict, List

from .context import CommandContext, CommandResult
from .impact_handlers import handle_impact
from .scan_handlers import handle_scan_extract
from .table_handlers import handle_calibrate, handle_estimate, handle_table1
from .team_handlers import handle_corrupt, handle_hysteresis

Handler = Callable[[CommandContext], CommandResult]

COMMANDS: Dict[str, Handler] = {
    "table1": handle_table1,
    "calibrate": handle_calibrate,
    "estimate": handle_estimate,
    "scan-extract": handle_scan_extract,
    "hysteresis": handle_hysteresis,
    "corrupt": handle_corrupt,
    "impact": handle_impact,
}

__all__: List[str] = ["COMMANDS", "CommandContext", "CommandResult", "Handler"]
