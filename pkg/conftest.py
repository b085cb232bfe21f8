# -*- coding: utf-8 -*-
import os

import django


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'web.settings_tests')
django.setup()
