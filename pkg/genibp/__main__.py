#!/usr/bin/env python
# -*- coding: utf-8 -*-
import sys

from genibp.cli.app import main

sys.exit(main())
