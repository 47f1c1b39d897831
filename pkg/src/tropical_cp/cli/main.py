import os
import sys


def main():
    """Entry point of the ``tropcp`` console script."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tropical_cp.settings")
    from django.core.management import execute_from_command_line

    execute_from_command_line(["tropcp", "tropcp", *sys.argv[1:]])


if __name__ == "__main__":
    main()
