import factory
from django.contrib.auth.models import User


class UserFactory(factory.django.DjangoModelFactory):
    """
    Plain users by default; the internal API takes ``is_staff``.
    """

    class Meta:
        model = User

    username = factory.Sequence(lambda n: 'analyst_%d' % (n + 1))
    is_staff = False
    is_superuser = False
