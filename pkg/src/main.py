import sys

from dotenv import load_dotenv

load_dotenv()


def main() -> int:
    """Run the hardlabel-attack command line."""
    from hardlabel_attack.cli import run

    return run()


if __name__ == "__main__":
    sys.exit(main())
