#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Príkazy: gen_data, train, decode, score, analyze, avg_ckpt.
"""
import os
import sys


def main():
	os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'web.settings')
	from django.core.management import execute_from_command_line
	execute_from_command_line(sys.argv)


if __name__ == '__main__':
	main()
