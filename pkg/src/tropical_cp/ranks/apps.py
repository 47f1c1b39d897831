from django.apps import AppConfig


class RanksConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "tropical_cp.ranks"
