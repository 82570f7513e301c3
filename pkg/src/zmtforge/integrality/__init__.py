from .certs import IntegralityCertificate, Verdict, combine_verdicts, evaluate_monic, verify_cert
from .tower import Carrier, Tower
from .emmanuel import EmmanuelModule, EmmanuelSequence, emmanuel
from .lying_over import (elimination_cert, lying_over_cert, lying_over_root_cert, lying_over_unit,
                         solve_combination, standard_module_gens)
from .kronecker import GaussJoyalWitness, SplittingAlgebra, content_ideal, gauss_joyal, kronecker_cert, kronecker_certs
from .comp import GlueResult, ShiftResult, glue, homogenize, shift_cert, shift_monic, weight_of

__all__ = [
    "IntegralityCertificate", "Verdict", "combine_verdicts", "evaluate_monic", "verify_cert",
    "Carrier", "Tower",
    "EmmanuelModule", "EmmanuelSequence", "emmanuel",
    "elimination_cert", "lying_over_cert", "lying_over_root_cert", "lying_over_unit",
    "solve_combination", "standard_module_gens",
    "GaussJoyalWitness", "SplittingAlgebra", "content_ideal", "gauss_joyal", "kronecker_cert", "kronecker_certs",
    "GlueResult", "ShiftResult", "glue", "homogenize", "shift_cert", "shift_monic", "weight_of",
]
