"""Django project package hosting the `opkit` command and its run history."""
