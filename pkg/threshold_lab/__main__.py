import logging
import sys

from threshold_lab.app import dispatch
from threshold_lab.core import settings


def main():
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
