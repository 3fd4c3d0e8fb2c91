"""Run history of the `opkit` command.

A row is written only when a command runs with `--save`. The stored report
is the same JSON document `--json` prints.
"""

from django.db import models


class RunRecord(models.Model):
    OUTCOME_CHOICES = [
        ('pass', 'pass'),
        ('fail', 'fail'),
        ('error', 'error'),
    ]

    command = models.CharField(max_length=200)
    outcome = models.CharField(max_length=10, choices=OUTCOME_CHOICES)
    exit_code = models.IntegerField(default=0)
    seed = models.IntegerField(default=0)
    schema = models.CharField(max_length=50)
    report = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = 'opkit_runs'
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.command} [{self.outcome}]"

    @property
    def witness_count(self) -> int:
        return len(self.report.get('witnesses', []))
