"""
ASGI config for sparsification_lab project.

It exposes the ASGI callable as a module-level variable named ``application``.
Only the admin is served; the sparsifiers run as management commands.
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'sparsification_lab.settings')

application = get_asgi_application()
