# -*- coding: utf-8 -*-
from __future__ import unicode_literals

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SECRET_KEY = os.environ.get('CODESWITCH_SECRET_KEY', 'codeswitch-local-only')

DEBUG = True

ALLOWED_HOSTS = []


INSTALLED_APPS = [
	'common_utils',
	'vocab',
	'tensor',
	'model',
	'loss',
	'embed',
	'decode',
	'score',
	'data',
	'cli',
]

# no models, the database is never opened
DATABASES = {
	'default': {
		'ENGINE': 'django.db.backends.sqlite3',
		'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
	}
}

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

LANGUAGE_CODE = 'en'

USE_I18N = True

USE_TZ = True

TIME_ZONE = 'Europe/Bratislava'

LOGGING = {
	'version': 1,
	'disable_existing_loggers': False,
	'formatters': {
		'console': {
			'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
		},
	},
	'handlers': {
		'console': {
			'level': 'DEBUG',
			'class': 'logging.StreamHandler',
			'formatter': 'console',
		},
	},
	'loggers': {
		'codeswitch': {
			'handlers': ['console'],
			'level': os.environ.get('CODESWITCH_LOG_LEVEL', 'INFO'),
			'propagate': True,
		},
	}
}

# checks every autodiff primitive for NaN / inf
CODESWITCH_TENSOR_DEBUG = False

CODESWITCH_DEFAULTS = {
	'data': {
		'num_chars': 60,
		'num_pinyin': 24,
		'num_eng_words': 30,
		'train_size': 2000,
		'val_size': 200,
		'test_size': 200,
		'min_length': 3,
		'max_length': 10,
		'switch_prob': 0.2,
		'mandarin_prob': 0.6,
		'context_strength': 0.8,
		'feature_dim': 16,
		'min_duration': 4,
		'max_duration': 8,
		'noise': 0.1,
		'seed': 0,
	},
	'model': {
		'architecture': 'mask_ctc',
		'model_dim': 64,
		'num_layers': 2,
		'num_heads': 4,
		'ff_dim': 256,
		'subsample_factor': 4,
		'dropout': 0.1,
		'num_cmlm_layers': 2,
		'num_p2m_layers': 1,
		'tie_ctc_embedding': False,
		'matreg_pair': 'default',
		'seed': 0,
	},
	'loss': {
		'alpha': 0.3,
		'beta': 1e-4,
		'smoothing': 'conventional',
		'epsilon': 0.1,
	},
	'smoothing': {
		'mode': 'topn',
		'tau': 0.5,
		'n': 10,
		'epsilon': 0.1,
		'same_language': False,
		'embedding_dim': 16,
		'window': 2,
		'vectors_path': '',
	},
	'decode': {
		'p_thres': 0.99,
		'iterations': 1,
		'mask_source': 'ctc',
		'workers': 4,
	},
	'optim': {
		'lr_factor': 1.0,
		'warmup_steps': 400,
		'batch_size': 16,
		'epochs': 10,
		'grad_clip': 5.0,
		'select': 'best_loss',
		'seed': 0,
	},
	'augment': {
		'num_time_masks': 2,
		'time_width': 5,
		'num_freq_masks': 2,
		'freq_width': 2,
	},
	'paths': {
		'data_dir': 'corpus',
		'exp_dir': 'exp',
	},
}
