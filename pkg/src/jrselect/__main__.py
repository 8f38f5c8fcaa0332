"""Entry point for ``python -m jrselect``."""

from .cli import main

if __name__ == "__main__":
    main()
