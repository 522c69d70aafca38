#!/usr/bin/env python
from genibp.models.scores import ScoreModel, Bernoulli, Poisson, NegBinomial, score_from_dict
from genibp.models.levy import (LevyDensity, BetaProcess, StableBeta, GammaProcess, StablePositive,
        GeneralizedGamma, Custom, Infinite, levy_from_dict, transform_levy)
from genibp.models.dishes import DishRecord, BuffetState
from genibp.models.multivar import (SBDPrior, FiniteMultiLevy, MultinomialScore, BivariateBernoulli,
        bivariate_bernoulli_model, MultiDishRecord, MultiBuffetState)
