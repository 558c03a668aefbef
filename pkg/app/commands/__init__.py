"""Command-line subcommand groups."""
from app.commands import check, form, netform, partitions, scenario, solve

GROUPS = (solve, check, form, netform, scenario, partitions)
