#!/usr/bin/env python
# exponents and mapping import genibp.models, which imports this package
from genibp.calculus.quadrature import QuadratureSettings, integrate, InverseCDFTable
