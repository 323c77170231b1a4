from rest_framework.authentication import TokenAuthentication


class ApiKeyAuthentication(TokenAuthentication):
    """
    ``Authorization: ApiKey <token>`` with the user's REST framework token.
    """
    keyword = 'ApiKey'
