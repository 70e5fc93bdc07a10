from flask import Flask
from dmcount.config import load_configurations, configure_logging


def create_app():
    app = Flask(__name__)

    # Load configurations and logging settings
    load_configurations(app)
    configure_logging(app.config["LOG_LEVEL"])

    from .views import api_blueprint

    app.register_blueprint(api_blueprint)

    return app
