#!/usr/bin/env python
from genibp.buffet.pairs import pair_sampler, sample_pair
from genibp.buffet.sequential import (sample_first_customer, sample_next_customer, sample_buffet,
        sample_new_dishes)
from genibp.buffet.matrix import export_matrix, import_matrix
from genibp.buffet.condiments import (mv_sample_next_customer, mv_sample_buffet, mv_jump_sampler,
        mv_pair_sampler, mv_posterior_of)
