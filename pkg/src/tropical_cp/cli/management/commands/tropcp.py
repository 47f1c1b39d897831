from django.core.management.base import BaseCommand, CommandError

from tropical_cp.cli.services.command_service import CommandService, add_subcommands


class Command(BaseCommand):
    help = "Tropical completely positive matrices: CP tests, bounds, decompositions and exact ranks."
    requires_system_checks = []

    def add_arguments(self, parser):
        add_subcommands(parser)

    def handle(self, *args, **options):
        report, exit_code = CommandService().execute(options)
        self.stdout.write(report.to_json())
        if exit_code:
            raise CommandError(
                f"{report.operation}: {report.status}", returncode=exit_code
            )
