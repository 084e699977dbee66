from django.apps import AppConfig


class SparsifiersConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'sparsifiers'
