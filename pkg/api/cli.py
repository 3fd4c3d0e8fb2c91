"""Console entry point: `opkit ...` is `manage.py opkit ...`.

Returns the process status instead of exiting, so tests can call `main()`.
Argument errors raised by the parser map to status 2, like any malformed
input.
"""

import os
import sys
from typing import List, Optional

import django
from django.core.management import call_command
from django.core.management.base import CommandError


def main(argv: Optional[List[str]] = None) -> int:
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'opkit_site.settings')
    django.setup()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        call_command('opkit', *argv)
    except CommandError as exc:
        message = str(exc)
        code = getattr(exc, 'returncode', 1)
        if message.startswith('Error: '):
            code = 2
        sys.stderr.write(f"opkit: {message}\n")
        return code
    except SystemExit as exc:
        # --help and parser exits
        return exc.code if isinstance(exc.code, int) else 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
