from .apps import DEMOS, Demo
from .formula import eval_formula
from .script import Report, load_script, parse_script, run_script

__all__ = ["DEMOS", "Demo", "eval_formula", "Report", "load_script", "parse_script", "run_script"]
