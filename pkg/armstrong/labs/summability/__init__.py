# Define a logger for this component
import logging
logger = logging.getLogger(__name__)

__version__ = "0.1"
