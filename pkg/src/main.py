import sys

from src.cli.parser import parse_args
from src.cli.runner import Runner
from src.utils.error_handler import handle_error


def main(argv=None) -> int:
    try:
        config = parse_args(argv)
        return Runner(config).run()
    except Exception as e:
        return handle_error(e)


if __name__ == "__main__":
    sys.exit(main())
