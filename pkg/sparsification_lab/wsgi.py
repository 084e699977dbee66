"""
WSGI config for sparsification_lab project.

It exposes the WSGI callable as a module-level variable named ``application``.
Only the admin is served; the sparsifiers run as management commands.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'sparsification_lab.settings')

application = get_wsgi_application()
