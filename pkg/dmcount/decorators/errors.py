from functools import wraps
from flask import jsonify
import logging

from ..utils.errors import (
    ConfigurationError,
    DmError,
    MethodUnavailable,
    OracleScaleExceeded,
)


def status_for(error: DmError) -> int:
    if isinstance(error, ConfigurationError):
        return 500
    if isinstance(error, (MethodUnavailable, OracleScaleExceeded)):
        return 422
    return 400


def domain_errors(f):
    """
    Decorator that turns dmcount exceptions raised by a view into JSON error responses.
    """

    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except DmError as e:
            status = status_for(e)
            logging.info(f"{f.__name__} rejected with {status}: {e}")
            return jsonify({"status": "error", "message": str(e)}), status

    return decorated_function
