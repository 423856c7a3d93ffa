from .lam import parse_lambda_term
from .problem import parse_problem
from .solution import FORMATS, JSON, TEXT, format_solution, parse_solution_json, solution_to_json
