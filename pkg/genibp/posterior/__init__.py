#!/usr/bin/env python
from genibp.posterior.jumps import BetaJump, ScaledGammaJump, QuadratureJump
from genibp.posterior.summary import (jump_law, posterior_of, predictive_existing, feature_pattern,
        log_marginal, explosivity_check)
