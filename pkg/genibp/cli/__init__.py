#!/usr/bin/env python
""" the genibp command line and its shipped json schema documents """
