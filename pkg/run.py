import logging

from dmcount import create_app


app = create_app()

if __name__ == "__main__":
    logging.info("dmcount API started")
    app.run(host="0.0.0.0", port=8000)
