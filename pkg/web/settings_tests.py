# -*- coding: utf-8 -*-
import copy

from web.settings import *

CODESWITCH_TENSOR_DEBUG = True

LOGGING['loggers']['codeswitch']['level'] = 'WARNING'

CODESWITCH_DEFAULTS = copy.deepcopy(CODESWITCH_DEFAULTS)
CODESWITCH_DEFAULTS['data'].update({
	'num_chars': 12,
	'num_pinyin': 6,
	'num_eng_words': 6,
	'train_size': 24,
	'val_size': 6,
	'test_size': 6,
	'min_length': 2,
	'max_length': 4,
	'feature_dim': 4,
	'min_duration': 4,
	'max_duration': 5,
})
CODESWITCH_DEFAULTS['model'].update({
	'model_dim': 8,
	'num_layers': 1,
	'num_heads': 2,
	'ff_dim': 16,
	'dropout': 0.0,
	'num_cmlm_layers': 1,
})
CODESWITCH_DEFAULTS['smoothing'].update({
	'n': 3,
	'embedding_dim': 4,
})
CODESWITCH_DEFAULTS['decode']['workers'] = 1
CODESWITCH_DEFAULTS['optim'].update({
	'batch_size': 4,
	'epochs': 1,
	'warmup_steps': 10,
})
