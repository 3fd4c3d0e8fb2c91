"""Django app for the `opkit` command.

Holds the run history model, the serializers that validate every JSON input
format and the `opkit` management command.
"""
