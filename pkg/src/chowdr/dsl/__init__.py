from .evaluator import Env, eval_text, evaluate
from .modelfile import ModelFile, load_model_file, parse_model_file
from .parser import format_expr, parse

__all__ = ["Env", "ModelFile", "eval_text", "evaluate", "format_expr", "load_model_file",
           "parse", "parse_model_file"]
