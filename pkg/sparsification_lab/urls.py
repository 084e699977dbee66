"""sparsification_lab URL Configuration

The admin is the only web surface: it lists recorded sparsifier runs and
their quality reports. Everything else happens through manage.py commands.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
