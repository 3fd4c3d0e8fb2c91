# Generated by Django 4.2.7 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=200)),
                ('outcome', models.CharField(choices=[('pass', 'pass'), ('fail', 'fail'), ('error', 'error')], max_length=10)),
                ('exit_code', models.IntegerField(default=0)),
                ('seed', models.IntegerField(default=0)),
                ('schema', models.CharField(max_length=50)),
                ('report', models.JSONField(default=dict)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'db_table': 'opkit_runs',
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
