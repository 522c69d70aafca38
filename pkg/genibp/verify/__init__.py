#!/usr/bin/env python
from genibp.verify.report import TestReport, merge_reports
from genibp.verify.oracle import truncated_crm_oracle, bias_bound
from genibp.verify.suites import SuiteSettings, SUITE_NAMES, run_suite
